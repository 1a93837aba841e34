#pragma once

#include "calculus.hpp"
#include "curvature.hpp"
#include "field.hpp"
#include "gravity.hpp"
#include "qint.hpp"
#include "scalar.hpp"
#include "solver.hpp"

namespace qrg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qrg
