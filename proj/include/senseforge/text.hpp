#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace senseforge {

// Lowercases ASCII letters and joins multiword expressions with underscores.
// Non-ASCII bytes pass through untouched; the same normalization is applied
// to graph lemmas, ranking entries, stopwords and corpus lemmas so they share
// one joining key.
std::string normalize_lemma(std::string_view raw);

std::vector<std::string_view> split(std::string_view s, char sep);

// Strict numeric parsing: the whole field must be consumed.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest decimal that round-trips to the same double (profile store format).
std::string shortest_double(double v);

// Fixed 6-decimal rendering (annotated TSV probabilities and confidences).
std::string fixed6(double v);

std::string_view trim(std::string_view s);

}  // namespace senseforge
