#include "detectlab/source_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace detectlab {

namespace {

using nlohmann::json;

json logit_row_to_json(std::span<const double> row) {
    json arr = json::array();
    for (double z : row) {
        if (z == -std::numeric_limits<double>::infinity()) {
            arr.push_back("-inf");
        } else {
            arr.push_back(z);
        }
    }
    return arr;
}

std::vector<double> logit_row_from_json(const json& arr) {
    if (!arr.is_array()) {
        throw std::invalid_argument("source file: logit row must be an array");
    }
    std::vector<double> row;
    row.reserve(arr.size());
    for (const auto& e : arr) {
        if (e.is_string()) {
            if (e.get<std::string>() != "-inf") {
                throw std::invalid_argument(
                    "source file: only \"-inf\" is accepted as a non-numeric logit");
            }
            row.push_back(-std::numeric_limits<double>::infinity());
        } else if (e.is_number()) {
            row.push_back(e.get<double>());
        } else {
            throw std::invalid_argument("source file: logit must be a number or \"-inf\"");
        }
    }
    return row;
}

std::string context_key(std::span<const TokenId> ctx, TokenId bos) {
    std::string key;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (i) key += ',';
        key += ctx[i] == bos ? "B" : std::to_string(ctx[i]);
    }
    return key;
}

std::vector<TokenId> context_from_key(const std::string& key, TokenId bos) {
    std::vector<TokenId> ctx;
    if (key.empty()) return ctx;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part == "B") {
            ctx.push_back(bos);
        } else {
            ctx.push_back(static_cast<TokenId>(std::stoul(part)));
        }
    }
    return ctx;
}

}  // namespace

json source_to_json(const MarkovSource& m) {
    const TokenId bos = bos_token(m.vocab().size());
    json j;
    j["schema"] = "detectlab-source-v1";
    json vocab;
    vocab["tokens"] = m.vocab().tokens();
    if (m.vocab().delimiter()) vocab["delimiter"] = *m.vocab().delimiter();
    if (!m.vocab().function_tokens().empty()) {
        vocab["function_tokens"] = m.vocab().function_tokens();
    }
    j["vocab"] = std::move(vocab);
    j["order"] = m.order();
    j["temperature"] = m.temperature();
    json transitions = json::object();
    m.for_each_row([&](std::vector<TokenId> ctx, std::span<const double> logits) {
        transitions[context_key(ctx, bos)] = logit_row_to_json(logits);
    });
    j["transitions"] = std::move(transitions);
    if (m.default_logits()) {
        j["default_logits"] = logit_row_to_json(*m.default_logits());
    }
    return j;
}

MarkovSource source_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vocab") || !j.contains("order") ||
        !j.contains("temperature") || !j.contains("transitions")) {
        throw std::invalid_argument(
            "source file: need vocab, order, temperature and transitions");
    }
    const json& jv = j.at("vocab");
    std::optional<TokenId> delim;
    if (jv.contains("delimiter")) delim = jv.at("delimiter").get<TokenId>();
    std::vector<TokenId> function_tokens;
    if (jv.contains("function_tokens")) {
        function_tokens = jv.at("function_tokens").get<std::vector<TokenId>>();
    }
    Vocabulary vocab(jv.at("tokens").get<std::vector<std::string>>(), delim,
                     std::move(function_tokens));
    const TokenId bos = bos_token(vocab.size());

    std::vector<MarkovSource::Row> rows;
    for (const auto& [key, val] : j.at("transitions").items()) {
        rows.push_back({context_from_key(key, bos), logit_row_from_json(val)});
    }
    std::optional<std::vector<double>> default_logits;
    if (j.contains("default_logits")) {
        default_logits = logit_row_from_json(j.at("default_logits"));
    }
    return MarkovSource(std::move(vocab), j.at("order").get<std::size_t>(),
                        j.at("temperature").get<double>(), std::move(rows),
                        std::move(default_logits));
}

void save_source(const MarkovSource& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << source_to_json(m).dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

MarkovSource load_source(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open source file: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("source file " + path.string() + ": " + e.what());
    }
    return source_from_json(j);
}

}  // namespace detectlab
