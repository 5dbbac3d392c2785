#include "qanc/json_util.hpp"

#include <cmath>

namespace qanc {

nlohmann::json xreal_to_json(const XReal& x) {
  if (x.representable()) return x.to_double();
  return {{"sign", x.sign()}, {"log10", x.log10_abs()}};
}

XReal xreal_from_json(const nlohmann::json& j) {
  if (j.is_number()) return XReal(j.get<double>());
  return XReal::from_log(j.at("log10").get<double>() * std::log(10.0),
                         j.value("sign", 1));
}

}  // namespace qanc
