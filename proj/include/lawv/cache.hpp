#ifndef LAWV_CACHE_HPP
#define LAWV_CACHE_HPP

#include <lawv/model.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lawv {

inline constexpr int cache_format_version = 1;

struct CacheStats {
    int hits = 0;
    int misses = 0;
};

struct CacheConfig {
    std::filesystem::path directory;
    bool disabled = false;
};

/// Default cache directory: $LAWV_CACHE_DIR, else ~/.cache/lawv, else
/// .lawv-cache in the working directory.
std::filesystem::path default_cache_dir();

/// Returns the up-to-size-k model list for the theory, reading
/// <dir>/<theory_hash>/models-k<K>[-iso].json when the stored hash,
/// bound and format version all match, and computing + atomically
/// writing it otherwise. Corrupt entries are recomputed with a warning
/// on stderr. Of the passed options only jobs, node_budget and
/// allow_empty matter; the size flags are overridden.
std::vector<FiniteAlgebra> cache_get_or_compute(const CacheConfig & config,
    std::shared_ptr<const Theory> theory, int k, bool up_to_iso,
    const EnumerationOptions & options = {}, CacheStats * stats = nullptr);

} // namespace lawv

#endif
