#include "fsrm/common.hpp"

#include <cstdio>
#include <limits>

namespace fsrm {

void SamplePath::validate() const {
  if (!(dt > 0.0)) throw DataError("SamplePath: dt must be > 0");
  if (values.empty()) throw DataError("SamplePath: at least one sample required");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("SamplePath: non-finite value");
  }
}

void FouParams::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw ConfigError("FouParams: hurst must lie in (0,1), got " + std::to_string(hurst));
  if (!(eta > 0.0)) throw ConfigError("FouParams: eta must be > 0");
  if (!(lambda > 0.0)) throw ConfigError("FouParams: lambda must be > 0");
  if (!std::isfinite(mean)) throw ConfigError("FouParams: mean must be finite");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace fsrm
