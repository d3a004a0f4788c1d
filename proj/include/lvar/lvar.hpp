#pragma once

#include "lvar/coefficient_cache.hpp"
#include "lvar/coefficients.hpp"
#include "lvar/error.hpp"
#include "lvar/euler_products.hpp"
#include "lvar/hardy_littlewood.hpp"
#include "lvar/lfunc_registry.hpp"
#include "lvar/predictions.hpp"
#include "lvar/primes.hpp"
#include "lvar/tauberian.hpp"
#include "lvar/variance.hpp"
#include "lvar/version.hpp"
#include "lvar/zero_stats.hpp"
