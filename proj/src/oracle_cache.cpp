#include "brue/oracle_cache.hpp"

#include <array>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "brue/format.hpp"
#include "brue/rng.hpp"

namespace brue {

namespace {

constexpr std::array<char, 8> kMagic = {'B', 'R', 'U', 'E', 'O', 'R', 'C', 'L'};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u64(std::uint64_t v) {
        std::array<char, 8> b;
        for (int i = 0; i < 8; ++i) {
            b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
        }
        out_.write(b.data(), b.size());
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    bool u64(std::uint64_t& v) {
        std::array<unsigned char, 8> b;
        if (!in_.read(reinterpret_cast<char*>(b.data()), b.size())) {
            return false;
        }
        v = 0;
        for (int i = 7; i >= 0; --i) {
            v = (v << 8) | b[static_cast<std::size_t>(i)];
        }
        return true;
    }
    bool f64(double& v) {
        std::uint64_t bits = 0;
        if (!u64(bits)) {
            return false;
        }
        v = std::bit_cast<double>(bits);
        return true;
    }

private:
    std::istream& in_;
};

} // namespace

std::filesystem::path default_oracle_cache_dir() {
    if (const char* env = std::getenv(kOracleCacheEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "oracle-cache";
}

std::uint64_t oracle_cache_key(const GenerativeMdp& mdp, std::span<const StateId> starts) {
    std::uint64_t starts_digest = starts.size();
    for (StateId s : starts) {
        starts_digest = mix64(starts_digest ^ s.value);
    }
    return mix64(mdp.config_hash() ^ mix64(starts_digest));
}

std::string oracle_cache_filename(const GenerativeMdp& mdp, std::uint64_t key, int horizon) {
    return std::string(mdp.name()) + "-" + format_hex64(key) + "-H" + std::to_string(horizon) +
           ".oracle";
}

void write_oracle(std::ostream& out, const OracleTable& table, std::uint64_t key) {
    out.write(kMagic.data(), kMagic.size());
    Writer w(out);
    w.u64(kOracleFormatVersion);
    w.u64(key);
    w.u64(static_cast<std::uint64_t>(table.horizon()));
    const BoundParams& p = table.params();
    w.u64(p.K);
    w.u64(p.B);
    w.f64(p.p);
    w.f64(p.d);
    w.u64(static_cast<std::uint64_t>(p.H));
    w.u64(p.degenerate ? 1 : 0);
    for (const auto& layer : table.layers()) {
        w.u64(layer.states.size());
        w.u64(layer.q.size());
        for (std::size_t i = 0; i < layer.states.size(); ++i) {
            w.u64(layer.states[i].value);
            w.f64(layer.values[i]);
            w.u64(layer.best[i]);
            w.u64(layer.minimizing[i]);
            w.u64(layer.q_begin[i]);
        }
        for (double q : layer.q) {
            w.f64(q);
        }
    }
}

std::optional<OracleTable> read_oracle(std::istream& in, std::uint64_t key, int horizon) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        return std::nullopt;
    }
    Reader r(in);
    std::uint64_t version = 0, stored_key = 0, stored_h = 0;
    if (!r.u64(version) || version != kOracleFormatVersion || !r.u64(stored_key) ||
        stored_key != key || !r.u64(stored_h) || stored_h != static_cast<std::uint64_t>(horizon)) {
        return std::nullopt;
    }
    BoundParams p;
    std::uint64_t K = 0, B = 0, H = 0, degenerate = 0;
    if (!r.u64(K) || !r.u64(B) || !r.f64(p.p) || !r.f64(p.d) || !r.u64(H) || !r.u64(degenerate)) {
        return std::nullopt;
    }
    p.K = K;
    p.B = B;
    p.H = static_cast<int>(H);
    p.degenerate = degenerate != 0;

    std::vector<OracleTable::Layer> layers(stored_h + 1);
    for (auto& layer : layers) {
        std::uint64_t n = 0, nq = 0;
        if (!r.u64(n) || !r.u64(nq)) {
            return std::nullopt;
        }
        layer.states.resize(n);
        layer.values.resize(n);
        layer.best.resize(n);
        layer.minimizing.resize(n);
        layer.q_begin.resize(n + 1);
        layer.q.resize(nq);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t best = 0, minimizing = 0;
            if (!r.u64(layer.states[i].value) || !r.f64(layer.values[i]) || !r.u64(best) ||
                !r.u64(minimizing) || !r.u64(layer.q_begin[i])) {
                return std::nullopt;
            }
            layer.best[i] = static_cast<ActionId>(best);
            layer.minimizing[i] = static_cast<std::uint8_t>(minimizing);
        }
        layer.q_begin[n] = nq;
        for (double& q : layer.q) {
            if (!r.f64(q)) {
                return std::nullopt;
            }
        }
    }
    return OracleTable(std::move(layers), p);
}

OracleTable cached_oracle(const GenerativeMdp& mdp, int horizon, std::span<const StateId> starts,
                          const std::filesystem::path& dir, std::uint64_t cap) {
    const std::uint64_t key = oracle_cache_key(mdp, starts);
    const std::filesystem::path path = dir / oracle_cache_filename(mdp, key, horizon);
    if (std::ifstream in(path, std::ios::binary); in) {
        if (auto table = read_oracle(in, key, horizon)) {
            return std::move(*table);
        }
    }
    OracleTable table = build_oracle(mdp, horizon, starts, cap);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (out) {
            write_oracle(out, table, key);
        }
    }
    std::filesystem::rename(tmp, path, ec);
    return table;
}

} // namespace brue
