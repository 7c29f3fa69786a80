#include "chaoslab/config.hpp"

#include <algorithm>
#include <concepts>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace chaoslab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

template <typename T>
struct NameTable {
    const char* name;
    T value;
};

template <typename T, std::size_t N>
T parse_enum(const std::string& s, const NameTable<T> (&table)[N],
             const char* what) {
    for (const auto& entry : table)
        if (s == entry.name) return entry.value;
    std::ostringstream msg;
    msg << "unknown " << what << " '" << s << "' (expected one of:";
    for (const auto& entry : table) msg << ' ' << entry.name;
    msg << ")";
    fail(msg.str());
}

template <typename T, std::size_t N>
std::string enum_name(T v, const NameTable<T> (&table)[N]) {
    for (const auto& entry : table)
        if (entry.value == v) return entry.name;
    return "?";
}

constexpr NameTable<UnaryFn> kUnaryNames[] = {
    {"sin_pi", UnaryFn::SinPi}, {"identity", UnaryFn::Identity}};
constexpr NameTable<BinaryFn> kBinaryNames[] = {{"sum", BinaryFn::Sum},
                                                {"product", BinaryFn::Product},
                                                {"mean", BinaryFn::Mean}};
constexpr NameTable<TransferFn> kTransferNames[] = {
    {"product", TransferFn::Product}, {"mean", TransferFn::Mean}};
constexpr NameTable<BaseMap> kBaseMapNames[] = {{"logistic", BaseMap::Logistic},
                                                {"sine", BaseMap::Sine}};
constexpr NameTable<ZetaChoice> kZetaNames[] = {
    {"x_n", ZetaChoice::Current}, {"x_next", ZetaChoice::Next}};
constexpr NameTable<SweepAxis> kSweepNames[] = {{"r1", SweepAxis::R1},
                                                {"r2", SweepAxis::R2}};
constexpr NameTable<PerturbTarget> kPerturbNames[] = {
    {"x0", PerturbTarget::X0},
    {"r1", PerturbTarget::R1},
    {"r2", PerturbTarget::R2}};

// Field cursor: walks an object, consuming known keys and rejecting leftovers
// so config typos surface as errors instead of silently using defaults.
class ObjectReader {
  public:
    ObjectReader(const json& node, std::string path)
        : node_(node), path_(std::move(path)) {
        if (!node.is_object()) fail(path_ + ": expected an object");
        for (auto it = node.begin(); it != node.end(); ++it)
            pending_.push_back(it.key());
    }

    ~ObjectReader() = default;

    bool has(const char* key) const { return node_.contains(key); }

    const json* take(const char* key) {
        if (!node_.contains(key)) return nullptr;
        pending_.erase(std::remove(pending_.begin(), pending_.end(), key),
                       pending_.end());
        return &node_.at(key);
    }

    void number(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(where(key) + ": expected a number");
            out = v->get<double>();
        }
    }

    template <typename T>
        requires std::integral<T>
    void integer(const char* key, T& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer())
                fail(where(key) + ": expected an integer");
            if constexpr (std::is_unsigned_v<T>) {
                if (!v->is_number_unsigned() && v->get<long long>() < 0)
                    fail(where(key) + ": expected a non-negative integer");
            }
            out = v->get<T>();
        }
    }

    template <typename T, std::size_t N>
    void enumerated(const char* key, T& out, const NameTable<T> (&table)[N]) {
        if (const json* v = take(key)) {
            if (!v->is_string()) fail(where(key) + ": expected a string");
            out = parse_enum(v->get<std::string>(), table, key);
        }
    }

    void finish() const {
        if (!pending_.empty())
            fail(path_ + ": unknown key '" + pending_.front() + "'");
    }

    std::string where(const char* key) const { return path_ + "." + key; }
    const json& node() const { return node_; }
    const std::string& path() const { return path_; }

  private:
    const json& node_;
    std::string path_;
    std::vector<std::string> pending_;
};

void apply_branch(const json& node, const std::string& path, Hcm2Branch& b) {
    ObjectReader r(node, path);
    r.number("omega", b.omega);
    r.number("alpha", b.alpha);
    r.number("beta", b.beta);
    r.enumerated("f", b.f, kUnaryNames);
    r.enumerated("g", b.g, kTransferNames);
    r.enumerated("h", b.h, kUnaryNames);
    r.enumerated("base", b.base, kBaseMapNames);
    r.finish();
}

void apply_axis(const json& node, const std::string& path, Hcm2Axis& axis) {
    ObjectReader r(node, path);
    if (const json* low = r.take("low")) apply_branch(*low, path + ".low", axis.low);
    if (const json* high = r.take("high"))
        apply_branch(*high, path + ".high", axis.high);
    r.finish();
}

void apply_root(RunConfig& cfg, const json& root, const std::string& origin) {
    ObjectReader r(root, origin);

    if (const json* map = r.take("map")) {
        ObjectReader m(*map, origin + ".map");
        m.number("r1", cfg.map.r1);
        m.number("r2", cfg.map.r2);
        m.number("x0", cfg.map.x0);
        m.number("gamma", cfg.map.gamma);
        m.enumerated("phi1", cfg.map.phi1, kUnaryNames);
        m.enumerated("phi2", cfg.map.phi2, kBinaryNames);
        m.finish();
    }

    if (const json* hcm2 = r.take("hcm2")) {
        ObjectReader h(*hcm2, origin + ".hcm2");
        h.enumerated("zeta", cfg.hcm2.zeta, kZetaNames);
        if (const json* x = h.take("x")) apply_axis(*x, origin + ".hcm2.x", cfg.hcm2.x);
        if (const json* y = h.take("y")) apply_axis(*y, origin + ".hcm2.y", cfg.hcm2.y);
        h.finish();
    }

    if (const json* analysis = r.take("analysis")) {
        ObjectReader a(*analysis, origin + ".analysis");
        a.integer("iterations", cfg.analysis.iterations);
        a.integer("burn_in", cfg.analysis.burn_in);
        a.integer("bins", cfg.analysis.bins);
        a.enumerated("sweep", cfg.analysis.sweep, kSweepNames);
        if (const json* range = a.take("range")) {
            if (!range->is_array() || range->size() != 2 ||
                !(*range)[0].is_number() || !(*range)[1].is_number())
                fail(origin + ".analysis.range: expected [lo, hi]");
            cfg.analysis.range_lo = (*range)[0].get<double>();
            cfg.analysis.range_hi = (*range)[1].get<double>();
        }
        a.integer("points", cfg.analysis.points);
        a.integer("bifurcation_burn_in", cfg.analysis.bifurcation_burn_in);
        a.integer("keep", cfg.analysis.keep);
        a.integer("lyapunov_iterations", cfg.analysis.lyapunov_iterations);
        a.number("d0", cfg.analysis.d0);
        a.enumerated("perturb", cfg.analysis.perturb, kPerturbNames);
        a.number("delta", cfg.analysis.delta);
        a.integer("horizon", cfg.analysis.horizon);
        a.number("threshold", cfg.analysis.threshold);
        a.integer("cobweb_steps", cfg.analysis.cobweb_steps);
        a.integer("threads", cfg.analysis.threads);
        a.finish();
    }

    if (const json* crypto = r.take("crypto")) {
        ObjectReader c(*crypto, origin + ".crypto");
        c.integer("rounds", cfg.crypto.rounds);
        c.integer("nonce", cfg.crypto.nonce);
        c.integer("trials", cfg.crypto.trials);
        c.finish();
    }

    r.finish();
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text,
                       const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // parse_error.byte is 1-based; count newlines before it for the line.
        std::size_t line = 1;
        const std::size_t limit =
            std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < limit; ++i)
            if (text[i] == '\n') ++line;
        fail(origin + ":" + std::to_string(line) + ": " + e.what());
    }
    apply_root(cfg, root, origin);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str(), path);
}

void validate(const RunConfig& cfg) {
    const MapParams& m = cfg.map;
    if (!std::isfinite(m.r1) || !std::isfinite(m.r2)) fail("map: r1/r2 must be finite");
    if (!(m.x0 >= 0.0 && m.x0 < 1.0)) fail("map: x0 must lie in [0,1)");
    if (!(m.gamma > 0.0) || !std::isfinite(m.gamma)) fail("map: gamma must be > 0");

    auto check_branch = [&](const Hcm2Branch& b, const char* which) {
        if (!std::isfinite(b.omega) || !std::isfinite(b.alpha) ||
            !std::isfinite(b.beta))
            fail(std::string("hcm2.") + which + ": weights must be finite");
    };
    check_branch(cfg.hcm2.x.low, "x.low");
    check_branch(cfg.hcm2.x.high, "x.high");
    check_branch(cfg.hcm2.y.low, "y.low");
    check_branch(cfg.hcm2.y.high, "y.high");

    const AnalysisConfig& a = cfg.analysis;
    if (a.iterations < 1) fail("analysis: iterations must be >= 1");
    if (a.bins < 2) fail("analysis: bins must be >= 2");
    if (!(a.range_lo < a.range_hi)) fail("analysis: range must satisfy lo < hi");
    if (a.points < 1) fail("analysis: points must be >= 1");
    if (a.keep < 1) fail("analysis: keep must be >= 1");
    if (a.lyapunov_iterations < 1000)
        fail("analysis: lyapunov_iterations must be >= 1000");
    if (!(a.d0 > 0.0) || a.d0 > 1e-9)
        fail("analysis: d0 must satisfy 0 < d0 <= 1e-9");
    if (a.delta == 0.0 || !std::isfinite(a.delta))
        fail("analysis: delta must be non-zero and finite");
    if (a.horizon < 1) fail("analysis: horizon must be >= 1");
    if (!(a.threshold > 0.0)) fail("analysis: threshold must be > 0");
    if (a.cobweb_steps < 1) fail("analysis: cobweb_steps must be >= 1");
    if (a.threads < 0) fail("analysis: threads must be >= 0");

    const CryptoConfig& c = cfg.crypto;
    if (c.rounds < 1) fail("crypto: rounds must be >= 1");
    if (c.trials < 1) fail("crypto: trials must be >= 1");
}

UnaryFn parse_unary_fn(const std::string& s) {
    return parse_enum(s, kUnaryNames, "function");
}
BinaryFn parse_binary_fn(const std::string& s) {
    return parse_enum(s, kBinaryNames, "combiner");
}
TransferFn parse_transfer_fn(const std::string& s) {
    return parse_enum(s, kTransferNames, "transfer map");
}
BaseMap parse_base_map(const std::string& s) {
    return parse_enum(s, kBaseMapNames, "base map");
}
ZetaChoice parse_zeta_choice(const std::string& s) {
    return parse_enum(s, kZetaNames, "zeta choice");
}
SweepAxis parse_sweep_axis(const std::string& s) {
    return parse_enum(s, kSweepNames, "sweep axis");
}
PerturbTarget parse_perturb_target(const std::string& s) {
    return parse_enum(s, kPerturbNames, "perturbation target");
}

std::string to_string(UnaryFn v) { return enum_name(v, kUnaryNames); }
std::string to_string(BinaryFn v) { return enum_name(v, kBinaryNames); }
std::string to_string(TransferFn v) { return enum_name(v, kTransferNames); }
std::string to_string(BaseMap v) { return enum_name(v, kBaseMapNames); }
std::string to_string(ZetaChoice v) { return enum_name(v, kZetaNames); }
std::string to_string(SweepAxis v) { return enum_name(v, kSweepNames); }
std::string to_string(PerturbTarget v) { return enum_name(v, kPerturbNames); }

}  // namespace chaoslab
