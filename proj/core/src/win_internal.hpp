#pragma once

#include "hce/win_engine.hpp"

namespace hce::detail {

/// Point estimates from counts with intervals collapsed onto the estimate.
WinStats point_estimates(const WinCounts& counts, double alpha);

}  // namespace hce::detail
