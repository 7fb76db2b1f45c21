#include "CLI11.hpp"
#include "json.hpp"

#include "nethier/corpus.hpp"
#include "nethier/nethier.hpp"
#include "nethier/oracle.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace nethier;
using json = nlohmann::ordered_json;

namespace {

enum class Exit { ok = 0, usage = 2, data = 3, blowup = 4 };

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Rows of (column, value) pairs rendered as TSV with a header or as JSON.
class Table {
public:
    void add(json row) { m_rows.push_back(std::move(row)); }

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json") {
            os << (m_rows.size() == 1 ? m_rows.front() : json(m_rows)).dump(2) << '\n';
            return;
        }
        if (m_rows.empty()) return;
        bool first = true;
        for (const auto& [k, v] : m_rows.front().items()) os << (first ? "" : "\t") << k, first = false;
        os << '\n';
        for (const auto& row : m_rows) {
            first = true;
            for (const auto& [k, v] : row.items()) {
                os << (first ? "" : "\t") << cell(v);
                first = false;
            }
            os << '\n';
        }
    }

private:
    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "NA";
        if (v.is_array()) {
            std::string s;
            for (const auto& x : v) s += (s.empty() ? "" : ",") + cell(x);
            return s;
        }
        if (v.is_number_float()) {
            std::ostringstream os;
            os.precision(10);
            os << v.get<double>();
            return os.str();
        }
        return v.dump();
    }
    std::vector<json> m_rows;
};

void write_table(const Table& t, const std::string& out, const std::string& format) {
    if (out.empty() || out == "-") {
        t.write(std::cout, format);
        return;
    }
    std::ofstream f(out);
    if (!f) throw data_error("cannot open '" + out + "' for writing");
    t.write(f, format);
}

std::vector<PointId> read_query_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open query file '" + path + "'");
    std::vector<PointId> q;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok.starts_with("#")) continue;
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        std::string rest;
        if (used != tok.size() || tok.starts_with("-") || (ls >> rest) || v > std::numeric_limits<PointId>::max())
            throw data_error("query file line " + std::to_string(no) + ": expected one point id");
        q.push_back(PointId(v));
    }
    if (q.empty()) throw usage_error("empty query set");
    return q;
}

InputFormat parse_format(const std::string& s) {
    if (s == "coords") return InputFormat::coords;
    if (s == "matrix") return InputFormat::matrix;
    throw usage_error("unknown input format '" + s + "'");
}

struct QueryConfig {
    std::string objective = "median";
    std::size_t p = 1;
    double eps = 0.5;
    bool strict = false;
    std::string algo = "fast";
};

/// Dispatches one query; `strict_idx` carries the c = 60 store when asked for.
ClusteringResult run_query(const Index& idx, const Index* strict_idx, std::span<const PointId> q,
                           const QueryConfig& cfg) {
    if (cfg.p == 0) throw usage_error("p must be at least 1");
    validate_eps(cfg.eps);
    if (cfg.objective == "median") {
        if (cfg.p > 1) return p_median(idx, q, cfg.p, cfg.eps);
        if (cfg.algo == "simple") return one_median_simple(idx, q, cfg.eps);
        if (cfg.strict) return one_median_fast(*strict_idx, q, AlgoParams::strict(cfg.eps));
        AlgoParams prm;
        prm.eps = cfg.eps;
        return one_median_fast(idx, q, prm);
    }
    if (cfg.objective == "center") return p_center(idx, q, cfg.p, cfg.eps);
    throw usage_error("objective must be median or center");
}

json result_record(const ClusteringResult& r, const QueryConfig& cfg, std::size_t n) {
    json j;
    j["objective_original"] = r.objective_original;
    j["objective_normalized"] = r.objective;
    j["centers"] = r.centers;
    j["eps"] = cfg.eps;
    j["p"] = cfg.p;
    j["n"] = n;
    j["objective_kind"] = cfg.objective;
    j["final_level"] = r.trace.final_level;
    j["root_level"] = r.trace.root_level;
    j["halted"] = r.trace.halted;
    j["candidates"] = r.trace.candidates;
    j["representatives"] = r.trace.representatives;
    j["far_points"] = r.trace.far_points;
    j["seed_size"] = r.trace.seed_size;
    j["coreset_size"] = r.trace.coreset_size;
    j["alg0"] = r.trace.alg0;
    return j;
}

int cmd_build(const std::string& in, const std::string& out, int c, const std::string& fmt) {
    std::ifstream f(in);
    if (!f) throw data_error("cannot open '" + in + "'");
    auto ps = load_points(f, parse_format(fmt));
    const auto t0 = Clock::now();
    const auto idx = Index::build(std::move(ps), c);
    const double secs = seconds_since(t0);
    save_index_file(idx, out);
    Table t;
    json row;
    row["m"] = idx.size();
    row["i_top"] = idx.i_top();
    row["diameter"] = idx.stats().diameter / idx.points().scale();
    row["aspect_ratio"] = idx.stats().aspect_ratio;
    row["nontrivial_lists"] = idx.lists().nontrivial_count();
    row["build_seconds"] = secs;
    t.add(row);
    t.write(std::cout, "tsv");
    return 0;
}

int cmd_query(const std::string& index_path, const std::string& qpath, const QueryConfig& cfg,
              const std::string& format) {
    const auto q = read_query_file(qpath);
    const auto idx = load_index_file(index_path);
    Index strict;
    if (cfg.strict && cfg.objective == "median" && cfg.p == 1) strict = Index::build(idx.points(), 60);
    const auto r = run_query(idx, &strict, q, cfg);
    Table t;
    t.add(result_record(r, cfg, q.size()));
    t.write(std::cout, format);
    return 0;
}

struct BenchConfig {
    std::string corpus = "line";
    std::vector<std::size_t> sizes{1000};
    std::vector<double> eps_grid{0.5};
    std::vector<std::size_t> p_grid{1};
    std::vector<std::string> objectives{"median", "center"};
    std::size_t n = 64;
    std::uint64_t seed = 1;
    double oracle_budget = 2e8;
    int repeats = 5;
};

int cmd_bench(const BenchConfig& cfg, const std::string& out, const std::string& format) {
    struct Instance {
        std::string name;
        PointSet ps;
    };
    std::vector<Instance> corpora;
    if (std::filesystem::is_regular_file(cfg.corpus)) {
        std::ifstream f(cfg.corpus);
        corpora.push_back({"matrix", load_points(f, InputFormat::matrix)});
    } else {
        const auto fam = corpus::parse_family(cfg.corpus);
        for (std::size_t m : cfg.sizes) {
            if (m == 0) throw usage_error("corpus sizes must be positive");
            corpora.push_back({std::string(corpus::to_string(fam)), corpus::generate(fam, m, cfg.seed)});
        }
    }
    Table t;
    for (auto& inst : corpora) {
        const std::size_t m = inst.ps.size();
        const auto t0 = Clock::now();
        const auto idx = Index::build(inst.ps);
        const double build_secs = seconds_since(t0);
        // the nested prefix keeps Q fixed while m grows
        std::vector<PointId> q;
        for (PointId i = 0; i < std::min(cfg.n, m); ++i) q.push_back(i);
        for (const auto& obj : cfg.objectives)
            for (std::size_t p : cfg.p_grid)
                for (double eps : cfg.eps_grid) {
                    QueryConfig qc;
                    qc.objective = obj;
                    qc.p = p;
                    qc.eps = eps;
                    ClusteringResult r;
                    std::vector<double> times;
                    for (int k = 0; k < std::max(1, cfg.repeats); ++k) {
                        const auto s = Clock::now();
                        r = run_query(idx, nullptr, q, qc);
                        times.push_back(seconds_since(s));
                    }
                    std::sort(times.begin(), times.end());
                    json row;
                    row["corpus"] = inst.name;
                    row["m"] = m;
                    row["n"] = q.size();
                    row["p"] = p;
                    row["eps"] = eps;
                    row["objective_kind"] = obj;
                    row["objective"] = r.objective_original;
                    row["oracle_objective"] = nullptr;
                    row["ratio"] = nullptr;
                    if (oracle::binomial(m, p) <= 1e7 && oracle::binomial(m, p) * double(q.size()) <= cfg.oracle_budget) {
                        const auto opt = obj == "median" ? oracle::exact_p_median(idx.points(), q, p)
                                                         : oracle::exact_p_center(idx.points(), q, p);
                        row["oracle_objective"] = opt.objective / idx.points().scale();
                        row["ratio"] = opt.objective > 0 ? r.objective / opt.objective : 1.0;
                    }
                    row["build_seconds"] = build_secs;
                    row["query_seconds"] = times[times.size() / 2];
                    t.add(row);
                }
    }
    write_table(t, out, format);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Net-hierarchy index and clustering queries"};
    app.require_subcommand(1);
    std::string format = "tsv";

    std::string in_path, out_path, in_format = "coords";
    int c = default_list_constant;
    auto* build = app.add_subcommand("build", "Build and persist an index from a point file");
    build->add_option("--in", in_path, "Point file")->required();
    build->add_option("--out", out_path, "Index file to write")->required();
    build->add_option("--c", c, "Stored c-list constant")->capture_default_str();
    build->add_option("--format", in_format, "Input format")->check(CLI::IsMember({"coords", "matrix"}))->capture_default_str();

    std::string index_path, query_path;
    QueryConfig qc;
    auto* query = app.add_subcommand("query", "Answer a clustering query against a persisted index");
    query->add_option("--index", index_path, "Index file")->required();
    query->add_option("--q", query_path, "Query file, one point id per line")->required();
    query->add_option("--objective", qc.objective)->check(CLI::IsMember({"median", "center"}))->capture_default_str();
    query->add_option("--p", qc.p, "Number of centers")->capture_default_str();
    query->add_option("--eps", qc.eps, "Approximation parameter in (0, 1/2]")->capture_default_str();
    query->add_flag("--strict-constants", qc.strict, "Use a c = 60 list store for the 1-median loop");
    query->add_option("--algo", qc.algo, "1-median variant")->check(CLI::IsMember({"fast", "simple"}))->capture_default_str();
    query->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();

    BenchConfig bc;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run queries over generated corpora and tabulate results");
    bench->add_option("--corpus", bc.corpus, "line, grid2d, gaussian-mixture, or a matrix file")->capture_default_str();
    bench->add_option("--sizes", bc.sizes, "Corpus sizes m")->delimiter(',');
    bench->add_option("--eps-grid", bc.eps_grid)->delimiter(',');
    bench->add_option("--p-grid", bc.p_grid)->delimiter(',');
    bench->add_option("--objectives", bc.objectives)->delimiter(',')->check(CLI::IsMember({"median", "center"}));
    bench->add_option("--n", bc.n, "Query size (ids 0..n-1)")->capture_default_str();
    bench->add_option("--seed", bc.seed)->capture_default_str();
    bench->add_option("--repeats", bc.repeats, "Timed runs per cell (median reported)")->capture_default_str();
    bench->add_option("--oracle-budget", bc.oracle_budget, "Max C(m,p)*n for the exact oracle")->capture_default_str();
    bench->add_option("--out", bench_out, "Output file (default stdout)");
    bench->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : int(Exit::usage);
    }

    try {
        if (*build) return cmd_build(in_path, out_path, c, in_format);
        if (*query) return cmd_query(index_path, query_path, qc, format);
        if (*bench) return cmd_bench(bc, bench_out, format);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return int(Exit::usage);
    } catch (const blowup_error& e) {
        std::cerr << "size limit: " << e.what() << '\n';
        return int(Exit::blowup);
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return int(Exit::data);
    }
    return int(Exit::ok);
}
