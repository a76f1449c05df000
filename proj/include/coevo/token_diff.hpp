#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace coevo {

using TokenStream = std::vector<std::string>;

/// Levenshtein distance with unit insert, delete and substitute costs.
std::size_t token_distance(const TokenStream& a, const TokenStream& b);

struct TokenDelta {
  TokenStream removed;  // in `a` only
  TokenStream added;    // in `b` only
};

/// Tokens outside a longest common subsequence of `a` and `b`.
TokenDelta token_delta(const TokenStream& a, const TokenStream& b);

}  // namespace coevo
