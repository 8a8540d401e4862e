#pragma once

#include "analytic.hpp"
#include "bie.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "msr.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special_fn.hpp"
#include "spectral.hpp"
#include "version.hpp"
