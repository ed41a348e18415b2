#ifndef ECRCF_ECRCF_HPP
#define ECRCF_ECRCF_HPP

#include <ecrcf/error.hpp>
#include <ecrcf/rational.hpp>
#include <ecrcf/real.hpp>
#include <ecrcf/puiseux.hpp>
#include <ecrcf/curve.hpp>
#include <ecrcf/reduction.hpp>
#include <ecrcf/quotient.hpp>
#include <ecrcf/parse.hpp>
#include <ecrcf/sampling.hpp>
#include <ecrcf/suites.hpp>

#endif
