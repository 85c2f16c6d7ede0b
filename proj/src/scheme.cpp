#include "advrec/scheme.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace advrec {

BucketFamily::BucketFamily(std::vector<Bucket> buckets) : buckets_(std::move(buckets))
{
    if (buckets_.empty()) {
        throw Error(ErrorKind::Validation, "bucket family must have at least one bucket");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        const auto& b = buckets_[i];
        if (!is_token(b.name)) {
            throw Error(ErrorKind::Validation, "bucket name is not a token: '" + b.name + "'");
        }
        if (!names.insert(b.name).second) {
            throw Error(ErrorKind::Validation, "duplicate bucket name '" + b.name + "'");
        }
        const bool last = i + 1 == buckets_.size();
        if (last != std::isinf(b.upper)) {
            throw Error(ErrorKind::Validation, "only the final bucket may be (and must be) unbounded");
        }
        if (i > 0 && !(b.upper > buckets_[i - 1].upper)) {
            throw Error(ErrorKind::Validation, "bucket upper bounds must be strictly increasing");
        }
    }
}

std::size_t BucketFamily::index_of(double value) const
{
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        if (value < buckets_[i].upper) {
            return i;
        }
    }
    return buckets_.size() - 1;
}

std::optional<std::size_t> BucketFamily::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        if (buckets_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BucketFamily default_magnitude_buckets()
{
    static constexpr const char* words[] = {"zero", "five", "ten", "fifteen", "twenty", "twenty_five",
        "thirty", "thirty_five", "forty", "forty_five", "fifty"};
    std::vector<Bucket> buckets;
    for (int i = 0; i < 10; ++i) {
        buckets.push_back({std::string(words[i]) + "_to_" + words[i + 1], 5.0 * (i + 1)});
    }
    buckets.push_back({"fifty_plus", kInf});
    return BucketFamily(std::move(buckets));
}

BucketFamily parse_family(std::string_view value, std::size_t line)
{
    std::vector<Bucket> buckets;
    for (const auto& item : split_ws(value)) {
        const auto colon = item.find(':');
        Bucket b;
        b.name = normalize_token(item.substr(0, colon));
        if (colon != std::string::npos) {
            const auto num = item.substr(colon + 1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc{} || ptr != num.data() + num.size()) {
                throw Error(ErrorKind::Parse, "bad bucket bound '" + num + "'", line);
            }
            b.upper = v;
        }
        buckets.push_back(std::move(b));
    }
    try {
        return BucketFamily(std::move(buckets));
    } catch (const Error& e) {
        throw Error(e.kind(), e.what(), line);
    }
}

std::string serialize_family(const BucketFamily& family)
{
    std::string out;
    for (const auto& b : family.buckets()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += b.name;
        if (!std::isinf(b.upper)) {
            out += ':' + format_real(b.upper);
        }
    }
    return out;
}

} // namespace

BucketScheme BucketScheme::defaults()
{
    BucketScheme s;
    s.area = BucketFamily({{"very_small", 0.02}, {"small", 0.05}, {"medium", 0.15}, {"large", 0.40}, {"very_large", kInf}});
    s.mip = BucketFamily({{"small", 1.5}, {"medium", 3.0}, {"large", 6.0}, {"very_large", kInf}});
    s.magnitude = default_magnitude_buckets();
    return s;
}

BucketScheme BucketScheme::parse(std::string_view text)
{
    BucketScheme s = defaults();
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        auto line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Parse, "expected 'key = buckets'", line_no);
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "area") {
            s.area = parse_family(value, line_no);
        } else if (key == "mip" || key == "movement_in_place") {
            s.mip = parse_family(value, line_no);
        } else if (key == "magnitude") {
            s.magnitude = parse_family(value, line_no);
        } else {
            throw Error(ErrorKind::Parse, "unknown scheme key '" + std::string(key) + "'", line_no);
        }
    }
    return s;
}

BucketScheme BucketScheme::load(const std::filesystem::path& path)
{
    try {
        return parse(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::string BucketScheme::serialize() const
{
    return "area = " + serialize_family(area) + "\nmip = " + serialize_family(mip) + "\nmagnitude = " + serialize_family(magnitude) + "\n";
}

namespace {

constexpr std::array<std::string_view, kSectorCount> kSectorNames = {"n", "ne", "e", "se", "s", "sw", "w", "nw"};

} // namespace

std::string_view sector_name(Sector s)
{
    return kSectorNames[static_cast<std::size_t>(s)];
}

std::optional<Sector> sector_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kSectorCount; ++i) {
        if (kSectorNames[i] == name) {
            return static_cast<Sector>(i);
        }
    }
    return std::nullopt;
}

Sector sector_from_angle(double degrees)
{
    // Counterclockwise sector index from east, then converted to clockwise-from-north order.
    double shifted = std::fmod(degrees + 22.5, 360.0);
    if (shifted < 0.0) {
        shifted += 360.0;
    }
    const int ccw = static_cast<int>(shifted / 45.0) % 8;
    // ccw: 0 e, 1 ne, 2 n, 3 nw, 4 w, 5 sw, 6 s, 7 se
    static constexpr std::array<Sector, 8> table = {Sector::E, Sector::NE, Sector::N, Sector::NW, Sector::W, Sector::SW, Sector::S, Sector::SE};
    return table[static_cast<std::size_t>(ccw)];
}

Sector rotate(Sector s, int ticks)
{
    int idx = (static_cast<int>(s) + ticks) % 8;
    if (idx < 0) {
        idx += 8;
    }
    return static_cast<Sector>(idx);
}

int clockwise_distance(Sector from, Sector to)
{
    return ((static_cast<int>(to) - static_cast<int>(from)) % 8 + 8) % 8;
}

std::string_view vertical_name(Vertical v)
{
    return v == Vertical::Top ? "top" : "bottom";
}

std::string_view horizontal_name(Horizontal h)
{
    return h == Horizontal::Left ? "left" : "right";
}

std::optional<Vertical> vertical_from_name(std::string_view name)
{
    if (name == "top") {
        return Vertical::Top;
    }
    if (name == "bottom") {
        return Vertical::Bottom;
    }
    return std::nullopt;
}

std::optional<Horizontal> horizontal_from_name(std::string_view name)
{
    if (name == "left") {
        return Horizontal::Left;
    }
    if (name == "right") {
        return Horizontal::Right;
    }
    return std::nullopt;
}

PlacementPath placement_path(double cx, double cy)
{
    PlacementPath path{};
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    for (auto& level : path) {
        const double mx = 0.5 * (x0 + x1);
        const double my = 0.5 * (y0 + y1);
        if (cx < mx) {
            level.horiz = Horizontal::Left;
            x1 = mx;
        } else {
            level.horiz = Horizontal::Right;
            x0 = mx;
        }
        if (cy < my) {
            level.vert = Vertical::Top;
            y1 = my;
        } else {
            level.vert = Vertical::Bottom;
            y0 = my;
        }
    }
    return path;
}

} // namespace advrec
