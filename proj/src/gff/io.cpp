#include "lsdev/gff/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ios>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace lsdev::gff {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

void write_csv(const Field& field, std::ostream& out) {
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "row,col,value\n";
    for (int r = 1; r <= field.n(); ++r) {
        for (int c = 1; c <= field.n(); ++c) out << r << ',' << c << ',' << field.at(r, c) << '\n';
    }
    out.precision(old);
}

void write_binary(const Field& field, std::ostream& out) {
    out.write(kBinaryMagic, 8);
    const std::uint64_t n = static_cast<std::uint64_t>(field.n());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(field.values().data()),
              static_cast<std::streamsize>(field.values().size() * sizeof(double)));
}

Field read_binary(std::istream& in) {
    char magic[8];
    std::uint64_t n = 0;
    if (!in.read(magic, 8) || std::memcmp(magic, kBinaryMagic, 8) != 0) {
        throw std::runtime_error("not a field file (bad magic)");
    }
    if (!in.read(reinterpret_cast<char*>(&n), sizeof n) || n < 4 || n > (1U << 16)) {
        throw std::runtime_error("field file has an invalid side length");
    }
    Field field(static_cast<int>(n));
    if (!in.read(reinterpret_cast<char*>(field.values().data()),
                 static_cast<std::streamsize>(field.values().size() * sizeof(double)))) {
        throw std::runtime_error("field file is truncated");
    }
    return field;
}

namespace {

template <typename Fn>
void with_output(const std::filesystem::path& path, std::ios::openmode mode, Fn&& fn) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void save_csv(const Field& field, const std::filesystem::path& path) {
    with_output(path, std::ios::out | std::ios::trunc, [&](std::ostream& o) { write_csv(field, o); });
}

void save_binary(const Field& field, const std::filesystem::path& path) {
    with_output(path, std::ios::out | std::ios::trunc | std::ios::binary,
                [&](std::ostream& o) { write_binary(field, o); });
}

Field load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return read_binary(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::string level_set_json(const LevelSet& set, int n) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["eta"] = set.eta;
    j["threshold"] = set.threshold;
    j["count"] = set.count;
    auto sites = nlohmann::ordered_json::array();
    for (const Site& s : set.sites) sites.push_back({s.row, s.col});
    j["sites"] = std::move(sites);
    return j.dump();
}

}  // namespace lsdev::gff
