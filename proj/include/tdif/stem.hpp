#pragma once

#include <string>
#include <string_view>

namespace tdif {

// Porter stemmer (the classic algorithm, matching the reference
// implementation's published vocabulary outputs). Expects a lowercase
// ASCII word; words shorter than 3 letters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace tdif
