#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace detectlab {

using TokenId = std::uint32_t;

// Index used inside context windows for positions before the first token.
// It is one past the last valid token id and never appears in a Sequence.
inline TokenId bos_token(std::size_t vocab_size) {
    return static_cast<TokenId>(vocab_size);
}

// Finite token alphabet. Tokens are addressed by index; names exist for
// serialization and debugging. A vocabulary may designate one sentence
// delimiter token and a set of function tokens for stylometric features.
class Vocabulary {
public:
    Vocabulary(std::vector<std::string> tokens,
               std::optional<TokenId> delimiter = std::nullopt,
               std::vector<TokenId> function_tokens = {});

    // "t0", "t1", ... names; convenient for synthetic sources.
    static Vocabulary indexed(std::size_t size,
                              std::optional<TokenId> delimiter = std::nullopt,
                              std::vector<TokenId> function_tokens = {});

    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::optional<TokenId> delimiter() const { return delimiter_; }
    const std::vector<TokenId>& function_tokens() const { return function_tokens_; }

    bool valid_token(TokenId t) const { return t < tokens_.size(); }

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

private:
    std::vector<std::string> tokens_;
    std::optional<TokenId> delimiter_;
    std::vector<TokenId> function_tokens_;
};

}  // namespace detectlab
