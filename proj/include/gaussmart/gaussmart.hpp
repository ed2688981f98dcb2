#pragma once

#include "errors.hpp"
#include "family.hpp"
#include "gaussian.hpp"
#include "generator.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "parallel.hpp"
#include "pathsim.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "sampler.hpp"
#include "stats.hpp"
#include "suite.hpp"
#include "verify.hpp"
