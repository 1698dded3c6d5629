#include "lawv/cache.hpp"
#include "lawv/hash.hpp"
#include "lawv/json_io.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace lawv {

namespace fs = std::filesystem;

std::filesystem::path default_cache_dir()
{
    if (const char * env = std::getenv("LAWV_CACHE_DIR"); env && *env)
        return fs::path(env);
    if (const char * home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".cache" / "lawv";
    return fs::path(".lawv-cache");
}

namespace {

std::vector<FiniteAlgebra> compute(const std::shared_ptr<const Theory> & theory, int k,
    bool up_to_iso, EnumerationOptions options)
{
    options.up_to_iso = up_to_iso;
    options.exact_size = false;
    return enumerate_models(theory, k, options);
}

} // namespace

std::vector<FiniteAlgebra> cache_get_or_compute(const CacheConfig & config,
    std::shared_ptr<const Theory> theory, int k, bool up_to_iso,
    const EnumerationOptions & options, CacheStats * stats)
{
    if (config.disabled)
        return compute(theory, k, up_to_iso, options);

    std::string hash = theory_hash(*theory);
    fs::path dir = config.directory / hash;
    fs::path file = dir / ("models-k" + std::to_string(k) + (up_to_iso ? "-iso" : "") + ".json");

    if (fs::exists(file)) {
        try {
            std::ifstream in(file);
            Json entry = Json::parse(in);
            if (entry.at("format_version").get<int>() == cache_format_version &&
                entry.at("theory_hash").get<std::string>() == hash &&
                entry.at("k").get<int>() == k &&
                entry.at("up_to_iso").get<bool>() == up_to_iso) {
                std::vector<FiniteAlgebra> models;
                for (const Json & record : entry.at("algebras"))
                    models.push_back(algebra_from_json(record, theory));
                if (stats)
                    ++stats->hits;
                return models;
            }
        }
        catch (const std::exception & e) {
            std::cerr << "warning: discarding corrupt cache entry " << file.string()
                      << " (" << e.what() << ")\n";
        }
    }

    if (stats)
        ++stats->misses;
    auto models = compute(theory, k, up_to_iso, options);

    Json payload{
        {"format_version", cache_format_version},
        {"theory", theory->name},
        {"theory_hash", hash},
        {"k", k},
        {"up_to_iso", up_to_iso},
    };
    Json records = Json::array();
    for (const auto & model : models)
        records.push_back(algebra_to_json(model));
    payload["algebras"] = std::move(records);

    std::error_code ec;
    fs::create_directories(dir, ec);
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            std::cerr << "warning: cannot write cache entry " << file.string() << "\n";
            return models;
        }
        out << payload.dump() << "\n";
    }
    fs::rename(tmp, file, ec);
    if (ec)
        std::cerr << "warning: cannot finalize cache entry " << file.string()
                  << " (" << ec.message() << ")\n";
    return models;
}

} // namespace lawv
