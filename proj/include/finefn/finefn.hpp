#pragma once

#include "finefn/errors.hpp"
#include "finefn/rational.hpp"
#include "finefn/monomial.hpp"
#include "finefn/polynomial.hpp"
#include "finefn/gcd.hpp"
#include "finefn/rational_function.hpp"
#include "finefn/qkernel.hpp"
#include "finefn/fine.hpp"
#include "finefn/qseries.hpp"
#include "finefn/report.hpp"
#include "finefn/identities.hpp"
#include "finefn/expr.hpp"
