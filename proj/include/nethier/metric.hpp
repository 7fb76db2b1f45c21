#pragma once

#include "nethier/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nethier {

using PointId = std::uint32_t;
using Level = int;

inline constexpr PointId no_point = std::numeric_limits<PointId>::max();

enum class Norm : std::uint8_t { L2 = 0, L1 = 1, Linf = 2 };
enum class Backing : std::uint8_t { coords = 0, matrix = 1 };
enum class InputFormat { coords, matrix };

inline std::string_view to_string(Norm n) {
    switch (n) {
    case Norm::L2: return "L2";
    case Norm::L1: return "L1";
    case Norm::Linf: return "Linf";
    }
    return "?";
}

/// 2^i for integer (possibly negative) i, exact.
inline double pow2(Level i) { return std::ldexp(1.0, i); }

/// Smallest i with 2^i > d; the top level of a hierarchy whose diameter is d.
inline Level top_level_for(double diameter) {
    if (!(diameter > 0.0)) return 0;
    Level i = 0;
    while (pow2(i) <= diameter) ++i;
    return i;
}

/// Smallest L >= 0 with 2^-L <= eps.
inline int log2_inverse_ceil(double eps) {
    int L = 0;
    while (pow2(-L) > eps) ++L;
    return L;
}

/// The ground metric M. Immutable once constructed; every distance it
/// reports is in normalized units (minimum interpoint distance 1).
class PointSet {
public:
    PointSet() = default;

    /// Row-major coordinates, `dim` values per point. Normalizes in place.
    static PointSet from_coords(std::size_t dim, std::vector<double> coords, Norm norm = Norm::L2) {
        if (dim == 0) throw data_error("coordinate dimension must be positive");
        if (coords.empty() || coords.size() % dim != 0)
            throw data_error("coordinate array size is not a positive multiple of the dimension");
        for (double v : coords)
            if (!std::isfinite(v)) throw data_error("non-finite coordinate");
        PointSet ps;
        ps.m_backing = Backing::coords;
        ps.m_norm = norm;
        ps.m_dim = dim;
        ps.m_size = coords.size() / dim;
        ps.m_values = std::move(coords);
        ps.normalize();
        return ps;
    }

    /// Full m x m distance matrix, row-major. Validates the metric axioms.
    static PointSet from_matrix(std::size_t m, std::vector<double> dists) {
        if (m == 0) throw data_error("matrix must have at least one point");
        if (dists.size() != m * m) throw data_error("matrix is not m x m");
        PointSet ps;
        ps.m_backing = Backing::matrix;
        ps.m_size = m;
        ps.m_dim = 0;
        ps.m_values = std::move(dists);
        ps.validate_matrix();
        ps.normalize();
        return ps;
    }

    /// Rebuilds an already-normalized set (persistence path); no rescaling.
    static PointSet from_normalized(Backing backing, Norm norm, std::size_t dim, std::size_t m,
                                    std::vector<double> values, double scale) {
        PointSet ps;
        ps.m_backing = backing;
        ps.m_norm = norm;
        ps.m_dim = dim;
        ps.m_size = m;
        ps.m_values = std::move(values);
        ps.m_scale = scale;
        const std::size_t expect = backing == Backing::coords ? m * dim : m * m;
        if (ps.m_values.size() != expect) throw data_error("metric payload size mismatch");
        return ps;
    }

    std::size_t size() const noexcept { return m_size; }
    std::size_t dim() const noexcept { return m_dim; }
    Norm norm() const noexcept { return m_norm; }
    Backing backing() const noexcept { return m_backing; }
    /// Factor applied at load: normalized = raw * scale.
    double scale() const noexcept { return m_scale; }
    std::span<const double> values() const noexcept { return m_values; }

    std::span<const double> coords(PointId a) const noexcept {
        return {m_values.data() + std::size_t(a) * m_dim, m_dim};
    }

    /// Unchecked normalized distance.
    double operator()(PointId a, PointId b) const noexcept {
        if (m_backing == Backing::matrix) return m_values[std::size_t(a) * m_size + b];
        const double* x = m_values.data() + std::size_t(a) * m_dim;
        const double* y = m_values.data() + std::size_t(b) * m_dim;
        return raw_coord_distance(x, y);
    }

    /// Checked normalized distance.
    double distance(PointId a, PointId b) const {
        if (a >= m_size || b >= m_size) throw data_error("point id out of range");
        return (*this)(a, b);
    }

    /// Minimum and maximum over all unordered pairs (full O(m^2) scan).
    std::pair<double, double> pair_extrema() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        const std::size_t m = m_size;
        if (m_backing == Backing::matrix) {
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a + 1; b < m; ++b) {
                    const double d = m_values[a * m + b];
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            return {lo, hi};
        }
        // Squared distances for L2 keep the inner loop free of sqrt.
        const bool squared = m_norm == Norm::L2;
        if (m_dim == 1) {
            for (std::size_t a = 0; a < m; ++a) {
                const double xa = m_values[a];
                for (std::size_t b = a + 1; b < m; ++b) {
                    const double d = std::abs(xa - m_values[b]);
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            }
            return {lo, hi};
        }
        if (m_dim == 2 && squared) {
            for (std::size_t a = 0; a < m; ++a) {
                const double xa = m_values[2 * a], ya = m_values[2 * a + 1];
                for (std::size_t b = a + 1; b < m; ++b) {
                    const double dx = xa - m_values[2 * b], dy = ya - m_values[2 * b + 1];
                    const double d = dx * dx + dy * dy;
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
            }
            return {std::sqrt(lo), std::sqrt(hi)};
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                const double d = (*this)(PointId(a), PointId(b));
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
        return {lo, hi};
    }

private:
    double raw_coord_distance(const double* x, const double* y) const noexcept {
        double acc = 0.0;
        switch (m_norm) {
        case Norm::L2:
            for (std::size_t k = 0; k < m_dim; ++k) {
                const double t = x[k] - y[k];
                acc += t * t;
            }
            return std::sqrt(acc);
        case Norm::L1:
            for (std::size_t k = 0; k < m_dim; ++k) acc += std::abs(x[k] - y[k]);
            return acc;
        case Norm::Linf:
            for (std::size_t k = 0; k < m_dim; ++k) acc = std::max(acc, std::abs(x[k] - y[k]));
            return acc;
        }
        return acc;
    }

    void normalize() {
        if (m_size < 2) {
            m_scale = 1.0;
            return;
        }
        const double min_dist = pair_extrema().first;
        if (!(min_dist > 0.0)) throw data_error("duplicate points: minimum interpoint distance is 0");
        m_scale = 1.0 / min_dist;
        if (m_scale != 1.0)
            for (double& v : m_values) v *= m_scale;
    }

    void validate_matrix() const {
        const std::size_t m = m_size;
        double max_d = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            if (m_values[a * m + a] != 0.0) throw data_error("matrix diagonal must be zero");
            for (std::size_t b = 0; b < m; ++b) {
                const double d = m_values[a * m + b];
                if (!std::isfinite(d)) throw data_error("non-finite distance");
                if (d < 0.0) throw data_error("negative distance");
                if (a != b && d == 0.0) throw data_error("distinct points at distance 0");
                if (d != m_values[b * m + a]) throw data_error("matrix is not symmetric");
                max_d = std::max(max_d, d);
            }
        }
        const double slack = 1e-9 * max_d;
        auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
            if (m_values[a * m + b] > m_values[a * m + c] + m_values[c * m + b] + slack)
                throw data_error("triangle inequality violated at (" + std::to_string(a) + "," +
                                 std::to_string(b) + "," + std::to_string(c) + ")");
        };
        if (m <= 200) {
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a + 1; b < m; ++b)
                    for (std::size_t c = 0; c < m; ++c) check(a, b, c);
        } else {
            std::mt19937_64 rng(0x5eed);
            std::uniform_int_distribution<std::size_t> pick(0, m - 1);
            for (int t = 0; t < 100000; ++t) check(pick(rng), pick(rng), pick(rng));
        }
    }

    Backing m_backing = Backing::coords;
    Norm m_norm = Norm::L2;
    std::size_t m_dim = 0;
    std::size_t m_size = 0;
    std::vector<double> m_values;
    double m_scale = 1.0;
};

struct MetricStats {
    double diameter = 0.0;     // normalized units
    double aspect_ratio = 1.0; // diameter / min distance
    Level i_top = 0;
    double min_dist = 0.0;     // original units
};

/// Exact stats by a full pair scan. Build-time only.
inline MetricStats compute_stats(const PointSet& ps) {
    if (ps.size() < 2) throw data_error("metric statistics need at least two points");
    const auto [lo, hi] = ps.pair_extrema();
    MetricStats s;
    s.diameter = hi;
    s.aspect_ratio = hi / lo;
    s.i_top = top_level_for(hi);
    s.min_dist = lo / ps.scale();
    return s;
}

namespace detail {

inline bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline Norm parse_norm(std::string_view s) {
    if (s == "L2" || s == "l2") return Norm::L2;
    if (s == "L1" || s == "l1") return Norm::L1;
    if (s == "Linf" || s == "linf" || s == "LINF") return Norm::Linf;
    throw data_error("unknown norm '" + std::string(s) + "'");
}

} // namespace detail

/// Parses the coords or matrix text format and returns a normalized PointSet.
inline PointSet load_points(std::istream& in, InputFormat format) {
    std::string line;
    std::size_t line_no = 0;
    if (format == InputFormat::coords) {
        std::size_t dim = 0;
        Norm norm = Norm::L2;
        std::vector<double> coords;
        bool first_content = true;
        while (std::getline(in, line)) {
            ++line_no;
            auto toks = detail::split_ws(line);
            if (toks.empty()) continue;
            if (first_content && toks[0].starts_with("#")) {
                first_content = false;
                // "#dim D norm L2"
                if (toks.size() != 4 || toks[0] != "#dim" || toks[2] != "norm")
                    throw data_error("line " + std::to_string(line_no) + ": malformed header");
                double d = 0;
                if (!detail::parse_double(toks[1], d) || d < 1 || d != std::floor(d))
                    throw data_error("line " + std::to_string(line_no) + ": bad dimension");
                dim = std::size_t(d);
                norm = detail::parse_norm(toks[3]);
                continue;
            }
            first_content = false;
            if (dim == 0) dim = toks.size();
            if (toks.size() != dim)
                throw data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                                 " values, got " + std::to_string(toks.size()));
            for (auto t : toks) {
                double v = 0;
                if (!detail::parse_double(t, v))
                    throw data_error("line " + std::to_string(line_no) + ": malformed value '" + std::string(t) + "'");
                coords.push_back(v);
            }
        }
        if (coords.empty()) throw data_error("no points in input");
        return PointSet::from_coords(dim, std::move(coords), norm);
    }

    std::size_t m = 0;
    std::vector<double> dists;
    bool have_m = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (!have_m) {
            double v = 0;
            if (toks.size() != 1 || !detail::parse_double(toks[0], v) || v < 1 || v != std::floor(v))
                throw data_error("line " + std::to_string(line_no) + ": expected point count");
            m = std::size_t(v);
            have_m = true;
            dists.reserve(m * m);
            continue;
        }
        if (toks.size() != m)
            throw data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(m) + " distances");
        if (dists.size() >= m * m) throw data_error("line " + std::to_string(line_no) + ": too many rows");
        for (auto t : toks) {
            double v = 0;
            if (!detail::parse_double(t, v))
                throw data_error("line " + std::to_string(line_no) + ": malformed value '" + std::string(t) + "'");
            dists.push_back(v);
        }
    }
    if (!have_m) throw data_error("empty matrix input");
    if (dists.size() != m * m) throw data_error("matrix has fewer than m rows");
    return PointSet::from_matrix(m, std::move(dists));
}

inline PointSet load_points(std::string_view text, InputFormat format) {
    std::istringstream in{std::string(text)};
    return load_points(in, format);
}

} // namespace nethier
