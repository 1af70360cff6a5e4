#pragma once

#include <filesystem>

#include <json.hpp>

#include "detectlab/markov.hpp"

namespace detectlab {

// JSON schema "detectlab-source-v1":
//   {
//     "schema": "detectlab-source-v1",
//     "vocab": {"tokens": [..], "delimiter": i?, "function_tokens": [..]?},
//     "order": k,
//     "temperature": tau,
//     "transitions": {"<ctx>": [logits..], ...},
//     "default_logits": [logits..]?    // row for contexts not listed
//   }
// Context keys are comma-joined window entries, oldest first, with "B" for
// the begin-of-sequence pad ("" for order 0). Logits serialize as JSON
// numbers with round-trip precision; -inf is written as the string "-inf".
// A save/load round trip reproduces every logit bit-exactly.

nlohmann::json source_to_json(const MarkovSource& m);
MarkovSource source_from_json(const nlohmann::json& j);

void save_source(const MarkovSource& m, const std::filesystem::path& path);
MarkovSource load_source(const std::filesystem::path& path);

}  // namespace detectlab
