#ifndef DIRWALK_VERSION_HPP
#define DIRWALK_VERSION_HPP

namespace dirwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dirwalk

#endif
