#pragma once

#include <cstddef>
#include <vector>

#include "detectlab/vocabulary.hpp"

namespace detectlab {

// A finite token string. Entries must be valid indices of the vocabulary
// the sequence is used with; operations check this at their boundary.
struct Sequence {
    std::vector<TokenId> tokens;

    std::size_t length() const { return tokens.size(); }
};

// Training data for model fitting.
struct Corpus {
    Vocabulary vocab;
    std::vector<Sequence> sequences;

    std::size_t total_tokens() const {
        std::size_t n = 0;
        for (const auto& s : sequences) n += s.length();
        return n;
    }
};

}  // namespace detectlab
