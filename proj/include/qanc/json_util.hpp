#pragma once

#include <json.hpp>

#include "qanc/xreal.hpp"

namespace qanc {

/// Plain number when the value fits in binary64, otherwise
/// {"sign": s, "log10": l}.
nlohmann::json xreal_to_json(const XReal& x);
XReal xreal_from_json(const nlohmann::json& j);

}  // namespace qanc
