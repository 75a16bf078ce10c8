#pragma once

#include "harmonorm/errors.hpp"
#include "harmonorm/jet.hpp"
#include "harmonorm/power_series.hpp"
#include "harmonorm/analytic_fn.hpp"
#include "harmonorm/mobius.hpp"
#include "harmonorm/harmonic_map.hpp"
#include "harmonorm/norm_engine.hpp"
#include "harmonorm/transforms.hpp"
#include "harmonorm/families.hpp"
#include "harmonorm/series_coeffs.hpp"
#include "harmonorm/verify.hpp"
