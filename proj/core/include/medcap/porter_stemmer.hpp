#pragma once

#include <string>
#include <string_view>

namespace medcap::text {

/// Porter (1980) suffix-stripping stemmer, as published (steps 1a-5b).
/// Expects a lowercase word; words of one or two letters are returned
/// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace medcap::text
