#include "advrec/util.hpp"

#include "advrec/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

namespace advrec {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Sequencing: return "sequencing error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Missing: return "missing input";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, std::size_t line, const std::string& file)
{
    std::string out = to_string(kind);
    if (!file.empty()) {
        out += " in " + file;
        if (line > 0) {
            out += ":" + std::to_string(line);
        }
    } else if (line > 0) {
        out += " at line " + std::to_string(line);
    }
    out += ": " + message;
    return out;
}

} // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line, const std::string& file)
    : std::runtime_error(decorate(kind, message, line, file)), kind_(kind), line_(line), detail_(message), file_(file)
{
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed)
{
    std::uint64_t hash = seed;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex_digest(std::uint64_t value)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n <= 1) {
        return 0;
    }
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

double Rng::normal(double mean, double stddev)
{
    // Box-Muller; u1 shifted away from zero.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt)
{
    std::array<char, 8> bytes{};
    for (std::size_t i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
    }
    return fnv1a(salt, fnv1a(std::string_view(bytes.data(), bytes.size())));
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Missing, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error(ErrorKind::Io, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            return out;
        }
        out.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_ws(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n')) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && !(text[j] == ' ' || text[j] == '\t' || text[j] == '\r' || text[j] == '\n')) {
            ++j;
        }
        if (j > i) {
            out.emplace_back(text.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool is_token(std::string_view text)
{
    if (text.empty() || !(text[0] >= 'a' && text[0] <= 'z')) {
        return false;
    }
    for (char c : text) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
            return false;
        }
    }
    return true;
}

std::string normalize_token(std::string_view text)
{
    std::string out(text);
    for (char& c : out) {
        if (c == '-') {
            c = '_';
        }
    }
    return out;
}

std::string format_real(double value)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

std::string format_tenths(std::int64_t tenths)
{
    const bool negative = tenths < 0;
    const std::int64_t mag = negative ? -tenths : tenths;
    std::string out = negative ? "-" : "";
    out += std::to_string(mag / 10);
    out += '.';
    out += static_cast<char>('0' + mag % 10);
    return out;
}

std::int64_t to_tenths(double value)
{
    return static_cast<std::int64_t>(std::llround(value * 10.0));
}

} // namespace advrec
