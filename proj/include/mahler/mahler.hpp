#pragma once

#include "mahler/cfrac.hpp"
#include "mahler/cyclotomic.hpp"
#include "mahler/degree.hpp"
#include "mahler/equation.hpp"
#include "mahler/errors.hpp"
#include "mahler/exponent.hpp"
#include "mahler/factor.hpp"
#include "mahler/gaps.hpp"
#include "mahler/io.hpp"
#include "mahler/numeric.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"
#include "mahler/rationality.hpp"
#include "mahler/series.hpp"
