#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

/// 64-bit FNV-1a. Stable across platforms; used for seeds, digests and fingerprints.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex_digest(std::uint64_t value);

/// Seeded generator with portable derived distributions (std distributions are
/// implementation-defined, which would break cross-platform byte identity).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    std::uint64_t below(std::uint64_t n);   // [0, n), unbiased
    double normal(double mean, double stddev);

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string_view trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_ws(std::string_view text);

/// Lowercase identifier check used for tokens: [a-z][a-z0-9_]*.
bool is_token(std::string_view text);
std::string normalize_token(std::string_view text);

/// Shortest round-trippable decimal for a double.
std::string format_real(double value);
std::string format_tenths(std::int64_t tenths);
std::int64_t to_tenths(double value);

} // namespace advrec
