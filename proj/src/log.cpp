#include <iostream>

#include "genspace/error.hpp"

namespace genspace {

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

}  // namespace genspace
