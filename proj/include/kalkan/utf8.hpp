#pragma once

#include <string>
#include <string_view>

namespace kalkan::utf8 {

bool is_valid(std::string_view bytes);

// Throws an encoding error on malformed input (overlongs, surrogates,
// truncated sequences).
std::u32string decode(std::string_view bytes);

std::string encode(const std::u32string& scalars);

void append(std::string& out, char32_t scalar);

// Number of Unicode scalar values; validates as it counts.
std::size_t scalar_count(std::string_view bytes);

}  // namespace kalkan::utf8
