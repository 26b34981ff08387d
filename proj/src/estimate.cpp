#include "fastmmd/estimate.hpp"

#include "fastmmd/error.hpp"

#include <string>

namespace fastmmd {

std::string_view to_string(EstimateKind kind) {
  return kind == EstimateKind::biased ? "biased" : "unbiased";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::linear: return "linear";
    case Method::btest: return "btest";
    case Method::fourier: return "fourier";
    case Method::fastfood: return "fastfood";
    case Method::circular: return "circular";
  }
  return "?";
}

EstimateKind parse_estimate_kind(std::string_view text) {
  if (text == "biased") return EstimateKind::biased;
  if (text == "unbiased") return EstimateKind::unbiased;
  throw InvalidArgument("unknown estimate kind '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::exact, Method::linear, Method::btest, Method::fourier, Method::fastfood,
                   Method::circular})
    if (to_string(m) == text) return m;
  throw InvalidArgument("unknown method '" + std::string(text) + "'");
}

}  // namespace fastmmd
