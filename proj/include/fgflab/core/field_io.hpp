#ifndef FGFLAB_CORE_FIELD_IO_HPP
#define FGFLAB_CORE_FIELD_IO_HPP

// Field and mask files: one JSON header line followed by raw little-endian
// payload (64-bit doubles row-major for fields, one byte per site for
// masks).  The header pins the lattice, the construction and its knobs,
// and the DFT normalization tag, so any reader can interpret the spectrum
// without out-of-band context.  Writes are deterministic: the same field
// serializes to byte-identical files.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "field.hpp"
#include "grid.hpp"
#include "spectrum.hpp"

namespace fgf {

inline constexpr int field_format_version = 1;

namespace detail {

inline void write_le_doubles(std::ostream& os, const std::vector<double>& v) {
    static_assert(sizeof(double) == 8);
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(8 * v.size()));
    } else {
        for (double x : v) {
            char b[8];
            std::memcpy(b, &x, 8);
            for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
            os.write(b, 8);
        }
    }
}

inline void read_le_doubles(std::istream& is, std::vector<double>& v) {
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(8 * v.size()));
    } else {
        for (double& x : v) {
            char b[8];
            is.read(b, 8);
            for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
            std::memcpy(&x, b, 8);
        }
    }
    if (!is) throw std::runtime_error("field file: payload truncated");
}

/// Header JSON for a field; key order is fixed by the object (sorted), so
/// serialization is reproducible.
inline nlohmann::json field_header_json(const LatticeField& h) {
    nlohmann::json j;
    j["format_version"] = field_format_version;
    j["d"] = h.grid.dim();
    j["N"] = h.grid.points_per_axis();
    j["L_box"] = h.grid.box_length();
    if (h.exponent)
        j["s"] = *h.exponent;
    else
        j["s"] = nullptr;
    j["construction"] = h.construction;
    j["seed"] = h.seed;
    j["modulo_constant"] = h.modulo_constant;
    j["dft_normalization"] = dft_normalization_tag;
    if (!h.params.empty()) {
        nlohmann::json cfg;
        for (const auto& [k, v] : h.params) cfg[k] = v;
        j["config"] = cfg;
    }
    return j;
}

/// Parse and validate a header line; returns the parsed JSON.
inline nlohmann::json parse_field_header(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(std::string(what) + ": missing header line");
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(std::string(what) + ": header is not valid JSON");
    if (j.value("format_version", -1) != field_format_version)
        throw std::runtime_error(std::string(what) + ": unsupported format_version");
    if (j.value("dft_normalization", "") != dft_normalization_tag)
        throw std::runtime_error(std::string(what) + ": unknown dft_normalization tag");
    return j;
}

/// Rebuild field metadata (everything but the values) from a header.
inline LatticeField field_from_header(const nlohmann::json& j, std::vector<double> values) {
    const LatticeGrid g(j.at("d").get<int>(), j.at("N").get<int>(), j.at("L_box").get<double>());
    LatticeField h(g, std::move(values));
    h.construction = j.value("construction", "raw");
    h.seed = j.value("seed", std::uint64_t{0});
    h.modulo_constant = j.value("modulo_constant", false);
    if (j.contains("s") && !j.at("s").is_null()) h.exponent = j.at("s").get<double>();
    if (j.contains("config"))
        for (const auto& [k, v] : j.at("config").items()) h.params.emplace_back(k, v.get<double>());
    return h;
}

}  // namespace detail

/// Write a field file: header line + N^d little-endian doubles.
inline void write_field_file(const std::string& path, const LatticeField& h) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_field_file: cannot open " + path);
    os << detail::field_header_json(h).dump() << '\n';
    detail::write_le_doubles(os, h.values);
    if (!os) throw std::runtime_error("write_field_file: write failed on " + path);
}

/// Read a field file back; validates format version, normalization tag, and
/// payload size.
inline LatticeField read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field_file: cannot open " + path);
    const nlohmann::json j = detail::parse_field_header(is, "read_field_file");
    if (j.contains("mask_threshold")) throw std::runtime_error("read_field_file: " + path + " is a mask file");
    const LatticeGrid g(j.at("d").get<int>(), j.at("N").get<int>(), j.at("L_box").get<double>());
    std::vector<double> v(g.site_count());
    detail::read_le_doubles(is, v);
    if (is.peek() != std::istream::traits_type::eof())
        throw std::runtime_error("read_field_file: trailing bytes after payload");
    return detail::field_from_header(j, std::move(v));
}

/// Level-set mask: 1 where the field value is >= threshold.
inline std::vector<std::uint8_t> level_set_mask(const LatticeField& h, double threshold) {
    std::vector<std::uint8_t> m(h.values.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = h.values[i] >= threshold ? 1 : 0;
    return m;
}

/// Write a mask file: the field's header plus the threshold, then one byte
/// per site (1 = value >= threshold).
inline void write_mask_file(const std::string& path, const LatticeField& h, double threshold) {
    nlohmann::json j = detail::field_header_json(h);
    j["mask_threshold"] = threshold;
    const std::vector<std::uint8_t> m = level_set_mask(h, threshold);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_mask_file: cannot open " + path);
    os << j.dump() << '\n';
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size()));
    if (!os) throw std::runtime_error("write_mask_file: write failed on " + path);
}

struct MaskFile {
    nlohmann::json header;
    std::vector<std::uint8_t> mask;
};

inline MaskFile read_mask_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_mask_file: cannot open " + path);
    nlohmann::json j = detail::parse_field_header(is, "read_mask_file");
    if (!j.contains("mask_threshold")) throw std::runtime_error("read_mask_file: " + path + " is not a mask file");
    const LatticeGrid g(j.at("d").get<int>(), j.at("N").get<int>(), j.at("L_box").get<double>());
    std::vector<std::uint8_t> m(g.site_count());
    is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size()));
    if (!is) throw std::runtime_error("read_mask_file: payload truncated");
    return {std::move(j), std::move(m)};
}

/// Restrict a field to the sublattice with the given axis pinned at `index`:
/// a (d-1)-dimensional field on the same spacing and box, metadata inherited.
inline LatticeField slice_field(const LatticeField& h, int axis, int index) {
    const LatticeGrid& g = h.grid;
    if (g.dim() < 2) throw std::invalid_argument("slice_field: need d >= 2 to slice");
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("slice_field: axis out of range");
    if (index < 0 || index >= g.points_per_axis()) throw std::invalid_argument("slice_field: index out of range");

    const LatticeGrid sub(g.dim() - 1, g.points_per_axis(), g.box_length());
    std::vector<double> v(sub.site_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto mi = sub.unravel(i);
        std::array<int, 4> full{0, 0, 0, 0};
        for (int a = 0, b = 0; a < g.dim(); ++a) full[a] = (a == axis) ? index : mi[b++];
        v[i] = h.values[g.ravel(full)];
    }
    LatticeField out(sub, std::move(v));
    // Values are the raw restriction (so slicing along two axes commutes
    // exactly); modulo_constant is inherited, which keeps the pairing
    // restriction to mean-zero weights without renormalizing the values.
    out.modulo_constant = h.modulo_constant;
    out.construction = h.construction;
    out.seed = h.seed;
    out.exponent = h.exponent;
    out.params = h.params;
    return out;
}

}  // namespace fgf

#endif
