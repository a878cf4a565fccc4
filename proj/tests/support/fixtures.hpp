#pragma once

#include <string>

#include "dsirs/json_io.hpp"

namespace testsupport {

inline dsirs::Instance fixture(const std::string& name) {
  return dsirs::load_instance(std::string(DSIRS_FIXTURE_DIR) + "/" + name + ".json");
}

inline std::string fixture_path(const std::string& name) {
  return std::string(DSIRS_FIXTURE_DIR) + "/" + name + ".json";
}

inline dsirs::Rational q(long num, long den = 1) { return dsirs::make_rational(num, den); }

}  // namespace testsupport
