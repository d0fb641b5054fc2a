#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "brue/oracle.hpp"

namespace brue {

/// Environment variable that overrides the cache directory.
inline constexpr const char* kOracleCacheEnv = "BRUE_ORACLE_CACHE";

inline constexpr std::uint32_t kOracleFormatVersion = 1;

/// $BRUE_ORACLE_CACHE if set, otherwise ./oracle-cache.
std::filesystem::path default_oracle_cache_dir();

/// Key covering the domain configuration and the start set.
std::uint64_t oracle_cache_key(const GenerativeMdp& mdp, std::span<const StateId> starts);

/// "<domain>-<key as 16 hex digits>-H<h>.oracle"
std::string oracle_cache_filename(const GenerativeMdp& mdp, std::uint64_t key, int horizon);

/// Little-endian binary: magic, format version, key, horizon, params, layers.
void write_oracle(std::ostream& out, const OracleTable& table, std::uint64_t key);

/// nullopt when the stream is not a current-version table for (key, horizon).
std::optional<OracleTable> read_oracle(std::istream& in, std::uint64_t key, int horizon);

/// Loads the table from `dir` or builds and stores it.
OracleTable cached_oracle(const GenerativeMdp& mdp, int horizon, std::span<const StateId> starts,
                          const std::filesystem::path& dir, std::uint64_t cap = kDefaultOracleCap);

} // namespace brue
