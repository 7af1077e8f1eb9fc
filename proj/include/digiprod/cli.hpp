#pragma once

// Command runner behind the digiprod executable. Argument parsing lives in
// tools/; everything here works on a RunConfig so it can be driven from tests.
//
// Exit status: 0 success, 1 verification failure, 2 usage / parse /
// validation error, 3 convergence hypothesis violated.

#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "digiprod/digits.hpp"
#include "digiprod/errors.hpp"
#include "digiprod/gamma.hpp"
#include "digiprod/identities.hpp"
#include "digiprod/products.hpp"
#include "digiprod/sequences.hpp"
#include "digiprod/spec_text.hpp"
#include "digiprod/summatory.hpp"

namespace digiprod {

enum class Command { eval, verify, verify_all, summatory, estimate, gamma, digits };
enum class OutputFormat { json, csv, plain };
enum class EvalMethod { naive, abel, extrapolated };

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_divergent = 3;

struct RunConfig {
  Command command = Command::eval;
  std::uint64_t terms = 1'000'000;
  std::optional<double> tol;
  std::optional<OutputFormat> output;  ///< per-command default when unset
  unsigned threads = 0;
  std::string seed_spec;  ///< text of --spec, or contents of --spec-file
  std::string claim;
  std::string estimate_target = "QR";
  EvalMethod method = EvalMethod::extrapolated;
  std::string quotient;
  std::optional<std::uint32_t> odd_base;
  std::uint64_t n = 0;
  std::uint32_t base = 10;
};

inline std::string read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot read spec file " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace detail {

using nlohmann::json;

inline std::string fmt17(double x) { return render_real(x); }

inline json eval_json(const EvalResult& r) {
  return {{"value_re", r.value.real()}, {"value_im", r.value.imag()}, {"log_re", r.log_value.real()},
          {"log_im", r.log_value.imag()}, {"err_est", r.err_est},         {"terms", r.terms},
          {"method", std::string(to_string(r.method))}};
}

inline json verify_json(const VerifyReport& r) {
  return {{"name", r.name},          {"computed", r.computed.real()}, {"computed_im", r.computed.imag()},
          {"expected", r.expected.real()}, {"expected_im", r.expected.imag()}, {"abs_err", r.abs_err},
          {"rel_err", r.rel_err},    {"log_err", r.log_err},          {"err_est", r.err_est},
          {"tol", r.tol},            {"pass", r.pass},                {"terms", r.terms},
          {"seconds", r.seconds}};
}

inline std::string verify_line(const VerifyReport& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.name + " computed=" + fmt17(r.computed.real()) +
         (r.computed.imag() != 0.0 ? " computed_im=" + fmt17(r.computed.imag()) : std::string()) +
         " expected=" + fmt17(r.expected.real()) + " rel_err=" + fmt17(r.rel_err) + " tol=" + fmt17(r.tol) +
         " terms=" + std::to_string(r.terms);
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline int run_eval(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  const ProductSpec spec = parse_product(cfg.seed_spec);
  const EvalOptions opts{cfg.threads};
  EvalResult r;
  switch (cfg.method) {
    case EvalMethod::naive: r = eval_naive(spec, cfg.terms, opts); break;
    case EvalMethod::abel: r = eval_abel(spec, cfg.terms, false, opts); break;
    default: r = eval_abel(spec, cfg.terms, true, opts); break;
  }
  if (fmt == OutputFormat::json) {
    json j = eval_json(r);
    j["spec"] = render(spec);
    emit(out, j);
  } else if (fmt == OutputFormat::csv) {
    out << "value_re,value_im,log_re,log_im,err_est,terms,method\n"
        << fmt17(r.value.real()) << ',' << fmt17(r.value.imag()) << ',' << fmt17(r.log_value.real()) << ','
        << fmt17(r.log_value.imag()) << ',' << fmt17(r.err_est) << ',' << r.terms << ',' << to_string(r.method)
        << '\n';
  } else {
    out << "value " << render_complex(r.value) << "\nlog " << render_complex(r.log_value) << "\nerr_est "
        << fmt17(r.err_est) << "\nterms " << r.terms << "\nmethod " << to_string(r.method) << '\n';
  }
  return exit_ok;
}

inline int run_verify(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  const auto claim = find_claim(cfg.claim);
  if (!claim) throw validation_error("unknown claim '" + cfg.claim + "'");
  const VerifyReport r = verify(*claim, cfg.terms, VerifyOptions{EvalOptions{cfg.threads}, cfg.tol});
  if (fmt == OutputFormat::json)
    emit(out, verify_json(r));
  else
    out << verify_line(r) << '\n';
  return r.pass ? exit_ok : exit_failed;
}

inline int run_verify_all(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  const VerifyAllReport all = verify_all(cfg.terms, VerifyOptions{EvalOptions{cfg.threads}, cfg.tol});
  if (fmt == OutputFormat::json) {
    json claims = json::array();
    for (const auto& r : all.claims) claims.push_back(verify_json(r));
    emit(out, {{"claims", claims},
               {"passed", all.passed},
               {"total", all.claims.size()},
               {"worst_rel_err", all.worst_rel_err},
               {"worst_claim", all.worst_claim},
               {"seconds", all.seconds}});
  } else {
    for (const auto& r : all.claims) out << verify_line(r) << '\n';
    out << all.passed << '/' << all.claims.size() << " passed, worst rel_err " << fmt17(all.worst_rel_err) << " ("
        << all.worst_claim << ")\n";
  }
  return all.passed == all.claims.size() ? exit_ok : exit_failed;
}

inline int run_summatory(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  const ExponentSeq seq = sequence_of(parse_spec(cfg.seed_spec));
  const Base base = base_of(seq);
  const HBProfile profile = hb_profile(seq, profile_window(base, cfg.terms));
  const GrowthReport g = growth_check(profile, seq, geometric_checkpoints(base, cfg.terms));
  if (fmt == OutputFormat::csv) {
    out << "N,re_F,im_F,abs_F,ratio\n";
    for (const auto& row : g.rows)
      out << row.N << ',' << fmt17(row.F.real()) << ',' << fmt17(row.F.imag()) << ',' << fmt17(std::abs(row.F))
          << ',' << fmt17(row.ratio) << '\n';
  } else if (fmt == OutputFormat::json) {
    json rows = json::array();
    for (const auto& row : g.rows)
      rows.push_back({{"N", row.N}, {"re_F", row.F.real()}, {"im_F", row.F.imag()}, {"abs_F", std::abs(row.F)},
                      {"ratio", row.ratio}});
    json j{{"alpha", g.alpha}, {"C_est", g.C_est}, {"bounded", g.pass}, {"rows", rows}};
    j["C_log"] = g.C_log ? json(*g.C_log) : json(nullptr);
    emit(out, j);
  } else {
    out << "alpha " << fmt17(g.alpha) << "\nC_est " << fmt17(g.C_est) << "\nbounded " << (g.pass ? "yes" : "no")
        << '\n';
    for (const auto& row : g.rows) out << row.N << ' ' << render_complex(row.F) << ' ' << fmt17(row.ratio) << '\n';
  }
  return exit_ok;
}

inline int run_estimate(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  if (cfg.estimate_target != "QR") throw validation_error("unknown estimate target '" + cfg.estimate_target + "'");
  const QREstimate e = estimate_QR(cfg.terms, EvalOptions{cfg.threads});
  if (fmt == OutputFormat::plain) {
    out << "Q " << fmt17(e.Q) << " +- " << fmt17(e.Q_err_est) << "\nR " << fmt17(e.R) << " +- "
        << fmt17(e.R_err_est) << "\nQR " << fmt17(e.product_check) << '\n';
  } else {
    emit(out, {{"Q", e.Q},
               {"Q_err_est", e.Q_err_est},
               {"R", e.R},
               {"R_err_est", e.R_err_est},
               {"product_check", e.product_check},
               {"terms", e.terms}});
  }
  return exit_ok;
}

inline int run_gamma(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  if (cfg.odd_base) {
    const std::uint64_t N = cfg.terms + (cfg.terms % 2);
    const GammaSideReport r = verify_gamma_side(*cfg.odd_base, N);
    json j{{"base", r.base},
           {"even_k", r.closed.even_k},
           {"odd_k", r.closed.odd_k},
           {"wallis", r.closed.wallis},
           {"half_pi", std::numbers::pi / 2.0},
           {"terms", r.terms},
           {"even_k_truncated", r.even_k_truncated},
           {"odd_k_truncated", r.odd_k_truncated},
           {"even_k_gamma", r.even_k_gamma},
           {"odd_k_gamma", r.odd_k_gamma},
           {"max_rel_err", r.max_rel_err},
           {"pass", r.pass}};
    if (fmt == OutputFormat::plain) {
      for (auto it = j.begin(); it != j.end(); ++it)
        out << it.key() << ' ' << (it->is_number_float() ? fmt17(it->get<double>()) : it->dump()) << '\n';
    } else {
      emit(out, j);
    }
    return r.pass ? exit_ok : exit_failed;
  }
  if (cfg.quotient.empty()) throw validation_error("gamma needs --quotient or --odd-base");
  const GammaQuotientSpec spec = parse_gamma_quotient(cfg.quotient);
  const double value = eval_gamma_quotient(spec);
  const double partial = partial_quotient(spec, cfg.terms);
  if (fmt == OutputFormat::plain) {
    out << "value " << fmt17(value) << "\npartial " << fmt17(partial) << "\nterms " << cfg.terms << '\n';
  } else {
    emit(out, {{"a", spec.a}, {"b", spec.b}, {"value", value}, {"partial", partial}, {"terms", cfg.terms}});
  }
  return exit_ok;
}

inline int run_digits(const RunConfig& cfg, OutputFormat fmt, std::ostream& out) {
  const Base base{cfg.base};
  const std::string text = to_string(cfg.n, base);
  const auto expansion = expand(cfg.n, base);
  std::vector<std::uint64_t> counts(base.value(), 0);
  for (auto d : expansion) ++counts[d];
  const std::uint64_t sum = digit_stat(cfg.n, DigitSum{}, base);
  if (fmt == OutputFormat::json) {
    json j{{"n", cfg.n},           {"base", base.value()}, {"digits", text},
           {"length", expansion.size()}, {"digit_sum", sum}, {"counts", counts}};
    if (base.value() == 2) j["thue_morse"] = thue_morse(cfg.n);
    emit(out, j);
  } else {
    out << text << "\nlength " << expansion.size() << "\ndigit_sum " << sum << '\n';
    for (std::uint32_t d = 0; d < base.value(); ++d)
      if (counts[d] != 0) out << "count[" << d << "] " << counts[d] << '\n';
    if (base.value() == 2) out << "thue_morse " << thue_morse(cfg.n) << '\n';
  }
  return exit_ok;
}

inline OutputFormat default_format(Command c) {
  switch (c) {
    case Command::summatory: return OutputFormat::csv;
    case Command::digits: return OutputFormat::plain;
    default: return OutputFormat::json;
  }
}

}  // namespace detail

/// Runs one command, writing the report to out and diagnostics to err.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.terms < 1) throw validation_error("--terms must be >= 1");
    const OutputFormat fmt = cfg.output.value_or(detail::default_format(cfg.command));
    switch (cfg.command) {
      case Command::eval: return detail::run_eval(cfg, fmt, out);
      case Command::verify: return detail::run_verify(cfg, fmt, out);
      case Command::verify_all: return detail::run_verify_all(cfg, fmt, out);
      case Command::summatory: return detail::run_summatory(cfg, fmt, out);
      case Command::estimate: return detail::run_estimate(cfg, fmt, out);
      case Command::gamma: return detail::run_gamma(cfg, fmt, out);
      case Command::digits: return detail::run_digits(cfg, fmt, out);
    }
  } catch (const convergence_hypothesis_violated& e) {
    err << "error: " << e.what() << '\n';
    return exit_divergent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace digiprod
