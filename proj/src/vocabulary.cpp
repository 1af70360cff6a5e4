#include "detectlab/vocabulary.hpp"

#include <stdexcept>
#include <unordered_set>

namespace detectlab {

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::optional<TokenId> delimiter,
                       std::vector<TokenId> function_tokens)
    : tokens_(std::move(tokens)),
      delimiter_(delimiter),
      function_tokens_(std::move(function_tokens)) {
    if (tokens_.size() < 2) {
        throw std::invalid_argument("vocabulary needs at least 2 tokens");
    }
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens_) {
        if (!seen.insert(t).second) {
            throw std::invalid_argument("duplicate token identifier: " + t);
        }
    }
    if (delimiter_ && *delimiter_ >= tokens_.size()) {
        throw std::invalid_argument("delimiter index out of range");
    }
    for (TokenId f : function_tokens_) {
        if (f >= tokens_.size()) {
            throw std::invalid_argument("function token index out of range");
        }
    }
}

Vocabulary Vocabulary::indexed(std::size_t size,
                               std::optional<TokenId> delimiter,
                               std::vector<TokenId> function_tokens) {
    std::vector<std::string> names;
    names.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        names.push_back("t" + std::to_string(i));
    }
    return Vocabulary(std::move(names), delimiter, std::move(function_tokens));
}

}  // namespace detectlab
