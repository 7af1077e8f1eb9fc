#pragma once

#include "digiprod/digits.hpp"
#include "digiprod/errors.hpp"
#include "digiprod/gamma.hpp"
#include "digiprod/identities.hpp"
#include "digiprod/products.hpp"
#include "digiprod/sequences.hpp"
#include "digiprod/spec_text.hpp"
#include "digiprod/summation.hpp"
#include "digiprod/summatory.hpp"
