#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gladst {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Fixed-width lowercase hex.
std::string hex64(std::uint64_t v);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace gladst
