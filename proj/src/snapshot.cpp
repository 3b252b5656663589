#include "chtx/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace chtx {

namespace {

constexpr char kMagic[5] = {'C', 'H', 'T', 'X', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return std::bit_cast<double>(v);
    }

    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw SnapshotError("snapshot truncated");
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Field& field) {
    const Grid& g = field.grid();
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.reserve(5 + 1 + 12 * g.dim() + 8 * g.size());
    out.push_back(static_cast<std::uint8_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) put_u32(out, static_cast<std::uint32_t>(g.count(a)));
    for (int a = 0; a < g.dim(); ++a) put_f64(out, g.length(a));
    for (double v : field.values()) put_f64(out, v);
    return out;
}

Field decode_snapshot(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 5) != 0) {
        throw SnapshotError("not a CHTX1 snapshot (bad magic)");
    }
    const std::vector<std::uint8_t> body(bytes.begin() + 5, bytes.end());
    Reader in(body);
    const int dim = in.u8();
    if (dim != 1 && dim != 2) throw SnapshotError("snapshot dimension must be 1 or 2");
    std::array<std::size_t, 2> counts{1, 1};
    std::array<double, 2> lengths{1.0, 1.0};
    for (int a = 0; a < dim; ++a) counts[a] = in.u32();
    for (int a = 0; a < dim; ++a) lengths[a] = in.f64();
    Grid grid = [&] {
        try {
            return Grid(dim, lengths, counts);
        } catch (const std::invalid_argument& e) {
            throw SnapshotError(std::string("snapshot grid invalid: ") + e.what());
        }
    }();
    std::vector<double> values(grid.size());
    for (auto& v : values) v = in.f64();
    if (!in.exhausted()) throw SnapshotError("trailing bytes after snapshot values");
    return Field(grid, std::move(values));
}

void write_snapshot(const std::filesystem::path& path, const Field& field) {
    const auto bytes = encode_snapshot(field);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SnapshotError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw SnapshotError("failed writing " + path.string());
}

Field read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open snapshot " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace chtx
