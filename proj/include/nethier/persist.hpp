#pragma once

#include "nethier/error.hpp"
#include "nethier/index.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace nethier {

/// Binary index container, version 1. Layout: magic "NHIX", u32 version,
/// then tagged sections (4-byte tag, u64 payload length, payload):
///   HEAD  m, c, i_top, scale, diameter, aspect ratio, min distance, backing, norm, dim
///   MTRC  normalized coordinates or distance matrix (f64)
///   NETS  membership bitmap for each level 1..i_top
///   TREE  node count, then (point, hi, lo, parent) per node in preorder
///   LIST  c-list CSR: point offsets, entry levels, entry offsets, payload
///   DFSN  leaves in DFS order
/// All integers and floats little-endian.
namespace persist {

inline constexpr std::array<char, 4> magic{'N', 'H', 'I', 'X'};
inline constexpr std::uint32_t version = 1;

static_assert(std::endian::native == std::endian::little, "index container assumes a little-endian host");

class Writer {
public:
    template <class T>
    void put(T v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
        m_out.insert(m_out.end(), p, p + sizeof(T));
    }
    template <class T>
    void put_array(std::span<const T> a) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(a.data());
        m_out.insert(m_out.end(), p, p + a.size_bytes());
    }
    void tag(std::string_view t) { m_out.insert(m_out.end(), t.begin(), t.end()); }

    std::size_t begin_section(std::string_view t) {
        tag(t);
        const std::size_t at = m_out.size();
        put<std::uint64_t>(0);
        return at;
    }
    void end_section(std::size_t at) {
        const std::uint64_t len = m_out.size() - at - sizeof(std::uint64_t);
        std::memcpy(m_out.data() + at, &len, sizeof len);
    }
    std::vector<std::uint8_t> take() { return std::move(m_out); }

private:
    std::vector<std::uint8_t> m_out;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : m_in(in) {}

    template <class T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, m_in.data() + m_pos, sizeof(T));
        m_pos += sizeof(T);
        return v;
    }
    template <class T>
    std::vector<T> get_array(std::uint64_t count) {
        if (count > (m_in.size() - m_pos) / sizeof(T)) throw data_error("index container truncated");
        std::vector<T> v(count);
        std::memcpy(v.data(), m_in.data() + m_pos, count * sizeof(T));
        m_pos += count * sizeof(T);
        return v;
    }
    /// Enters the next section, which must carry `expect`; returns its end offset.
    std::size_t section(std::string_view expect) {
        need(4 + sizeof(std::uint64_t));
        const std::string_view t(reinterpret_cast<const char*>(m_in.data() + m_pos), 4);
        if (t != expect) throw data_error("index container: expected section " + std::string(expect));
        m_pos += 4;
        const auto len = get<std::uint64_t>();
        if (len > m_in.size() - m_pos) throw data_error("index container truncated");
        return m_pos + std::size_t(len);
    }
    void expect_at(std::size_t end) const {
        if (m_pos != end) throw data_error("index container: section length mismatch");
    }
    bool done() const { return m_pos == m_in.size(); }
    std::size_t pos() const { return m_pos; }

private:
    void need(std::size_t n) const {
        if (n > m_in.size() - m_pos) throw data_error("index container truncated");
    }
    std::span<const std::uint8_t> m_in;
    std::size_t m_pos = 0;
};

} // namespace persist

inline std::vector<std::uint8_t> save_index(const Index& idx) {
    persist::Writer w;
    w.put_array<char>(persist::magic);
    w.put(persist::version);

    const auto& ps = idx.points();
    const std::uint64_t m = ps.size();
    const auto& st = idx.stats();

    auto s = w.begin_section("HEAD");
    w.put(m);
    w.put<std::int32_t>(idx.c());
    w.put<std::int32_t>(idx.i_top());
    w.put(ps.scale());
    w.put(st.diameter);
    w.put(st.aspect_ratio);
    w.put(st.min_dist);
    w.put<std::uint8_t>(std::uint8_t(ps.backing()));
    w.put<std::uint8_t>(std::uint8_t(ps.norm()));
    w.put<std::uint64_t>(ps.dim());
    w.end_section(s);

    s = w.begin_section("MTRC");
    w.put_array(ps.values());
    w.end_section(s);

    s = w.begin_section("NETS");
    const std::size_t bytes = std::size_t((m + 7) / 8);
    for (Level i = 1; i <= idx.i_top(); ++i) {
        std::vector<std::uint8_t> bits(bytes, 0);
        for (PointId p : idx.nets().net(i)) bits[p / 8] |= std::uint8_t(1u << (p % 8));
        w.put_array<std::uint8_t>(bits);
    }
    w.end_section(s);

    s = w.begin_section("TREE");
    const auto& tree = idx.tree();
    w.put<std::uint64_t>(tree.size());
    for (const auto& n : tree.nodes()) {
        w.put<std::uint32_t>(n.point);
        w.put<std::int32_t>(n.hi);
        w.put<std::int32_t>(n.lo);
        w.put<std::uint32_t>(n.parent);
    }
    w.end_section(s);

    s = w.begin_section("LIST");
    const auto& lists = idx.lists();
    w.put<std::uint64_t>(lists.nontrivial_count());
    w.put<std::uint64_t>(lists.payload_size());
    w.put_array(lists.point_begin());
    w.put_array(lists.entry_level());
    w.put_array(lists.entry_begin());
    w.put_array(lists.payload());
    w.end_section(s);

    s = w.begin_section("DFSN");
    w.put_array(idx.queries().leaf_order());
    w.end_section(s);
    return w.take();
}

inline Index load_index(std::span<const std::uint8_t> bytes) {
    persist::Reader r(bytes);
    const auto mg = r.get_array<char>(4);
    if (!std::equal(mg.begin(), mg.end(), persist::magic.begin())) throw data_error("not a nethier index file");
    const auto ver = r.get<std::uint32_t>();
    if (ver != persist::version) throw data_error("unsupported index version " + std::to_string(ver));

    auto end = r.section("HEAD");
    const auto m = r.get<std::uint64_t>();
    const int c = r.get<std::int32_t>();
    const Level i_top = r.get<std::int32_t>();
    const double scale = r.get<double>();
    MetricStats st;
    st.diameter = r.get<double>();
    st.aspect_ratio = r.get<double>();
    st.min_dist = r.get<double>();
    st.i_top = i_top;
    const auto backing = r.get<std::uint8_t>();
    const auto norm = r.get<std::uint8_t>();
    const auto dim = r.get<std::uint64_t>();
    r.expect_at(end);
    if (m == 0 || m > std::numeric_limits<PointId>::max() || i_top < 0 || i_top > 2048 || backing > 1 || norm > 2)
        throw data_error("index header out of range");

    end = r.section("MTRC");
    const std::uint64_t count = backing == std::uint8_t(Backing::coords) ? m * dim : m * m;
    auto values = r.get_array<double>(count);
    r.expect_at(end);
    PointSet ps = PointSet::from_normalized(Backing(backing), Norm(norm), dim, m, std::move(values), scale);

    end = r.section("NETS");
    Hierarchy h;
    h.nets.i_top = i_top;
    h.nets.top.assign(m, 0);
    h.nets.levels.assign(std::size_t(i_top) + 1, {});
    for (PointId p = 0; p < m; ++p) h.nets.levels[0].push_back(p);
    const std::size_t bytes_per = std::size_t((m + 7) / 8);
    for (Level i = 1; i <= i_top; ++i) {
        const auto bits = r.get_array<std::uint8_t>(bytes_per);
        for (PointId p = 0; p < m; ++p)
            if (bits[p / 8] >> (p % 8) & 1u) {
                if (h.nets.top[p] != i - 1) throw data_error("index nets are not nested");
                h.nets.top[p] = i;
                h.nets.levels[std::size_t(i)].push_back(p);
            }
    }
    r.expect_at(end);

    end = r.section("TREE");
    const auto n = r.get<std::uint64_t>();
    if (n > (bytes.size() / 16)) throw data_error("index tree size out of range");
    std::vector<TreeNode> nodes(n);
    for (auto& nd : nodes) {
        nd.point = r.get<std::uint32_t>();
        nd.hi = r.get<std::int32_t>();
        nd.lo = r.get<std::int32_t>();
        nd.parent = r.get<std::uint32_t>();
    }
    r.expect_at(end);
    h.tree = HierarchyTree(std::move(nodes), m);

    end = r.section("LIST");
    const auto entries = r.get<std::uint64_t>();
    const auto payload = r.get<std::uint64_t>();
    auto point_begin = r.get_array<std::uint32_t>(m + 1);
    auto entry_level = r.get_array<Level>(entries);
    auto entry_begin = r.get_array<std::uint64_t>(entries + 1);
    auto members = r.get_array<PointId>(payload);
    r.expect_at(end);
    h.lists = CListStore(c, std::move(point_begin), std::move(entry_level), std::move(entry_begin), std::move(members));

    end = r.section("DFSN");
    const auto order = r.get_array<PointId>(m);
    r.expect_at(end);
    if (!r.done()) throw data_error("trailing bytes after index container");

    Index idx = Index::assemble(std::move(ps), std::move(h), st);
    const auto rebuilt = idx.queries().leaf_order();
    if (!std::equal(order.begin(), order.end(), rebuilt.begin(), rebuilt.end()))
        throw data_error("stored DFS numbering disagrees with the tree");
    return idx;
}

inline void save_index_file(const Index& idx, const std::string& path) {
    const auto bytes = save_index(idx);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw data_error("failed writing '" + path + "'");
}

inline Index load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_index(bytes);
}

} // namespace nethier
