#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <lawv/cache.hpp>
#include <lawv/clone.hpp>
#include <lawv/dsl.hpp>
#include <lawv/hash.hpp>
#include <lawv/json_io.hpp>

#include <filesystem>
#include <fstream>
#include <random>

using namespace lawv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() /
            ("lawv-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("algebra records round-trip through JSON")
{
    auto monoid = oracles::parse(fixtures::monoid);
    for (const auto & model : enumerate_models(monoid, 3, {})) {
        FiniteAlgebra back = algebra_from_json(algebra_to_json(model), monoid);
        CHECK(back == model);
    }
}

TEST_CASE("algebra records validate theory name, hash and shape")
{
    auto monoid = oracles::parse(fixtures::monoid);
    auto pointed = oracles::parse(fixtures::pointed);
    FiniteAlgebra z2{monoid, 2, {{0, 1, 1, 0}, {0}}};
    Json record = algebra_to_json(z2);
    CHECK_THROWS_AS(algebra_from_json(record, pointed), Error);

    Json wrong_shape = record;
    wrong_shape["tables"]["mul"] = std::vector<int>{0, 1};
    CHECK_THROWS_AS(algebra_from_json(wrong_shape, monoid), Error);

    Json out_of_range = record;
    out_of_range["tables"]["e"] = 9;
    CHECK_THROWS_AS(algebra_from_json(out_of_range, monoid), Error);
}

TEST_CASE("theory hash distinguishes theories and ignores nothing")
{
    auto monoid = oracles::parse(fixtures::monoid);
    auto group = oracles::parse(fixtures::group);
    CHECK(theory_hash(*monoid) != theory_hash(*group));
    CHECK(theory_hash(*monoid) == theory_hash(parse_theory(render_theory(*monoid))));
}

TEST_CASE("cache: second read is a hit with an identical payload")
{
    auto monoid = oracles::parse(fixtures::monoid);
    TempDir dir;
    CacheConfig config{dir.path, false};
    CacheStats stats;

    auto first = cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(stats.misses == 1);
    CHECK(stats.hits == 0);

    auto second = cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(stats.hits == 1);
    CHECK(stats.misses == 1);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(first[i] == second[i]);

    fs::path file = dir.path / theory_hash(*monoid) / "models-k2.json";
    CHECK(fs::exists(file));
}

TEST_CASE("cache: iso and non-iso entries are distinct")
{
    auto monoid = oracles::parse(fixtures::monoid);
    TempDir dir;
    CacheConfig config{dir.path, false};
    CacheStats stats;
    auto labeled = cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    auto reps = cache_get_or_compute(config, monoid, 2, true, {}, &stats);
    CHECK(stats.misses == 2);
    CHECK(labeled.size() == 5);
    CHECK(reps.size() == 3);
}

TEST_CASE("cache: corrupt entries are recomputed and overwritten")
{
    auto monoid = oracles::parse(fixtures::monoid);
    TempDir dir;
    CacheConfig config{dir.path, false};
    CacheStats stats;
    cache_get_or_compute(config, monoid, 2, false, {}, &stats);

    fs::path file = dir.path / theory_hash(*monoid) / "models-k2.json";
    std::ofstream(file) << "not json at all";
    auto models = cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(stats.misses == 2);
    CHECK(models.size() == 5);
    // Overwritten with a good entry.
    cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(stats.hits == 1);
}

TEST_CASE("cache: format version bump invalidates")
{
    auto monoid = oracles::parse(fixtures::monoid);
    TempDir dir;
    CacheConfig config{dir.path, false};
    CacheStats stats;
    cache_get_or_compute(config, monoid, 2, false, {}, &stats);

    fs::path file = dir.path / theory_hash(*monoid) / "models-k2.json";
    Json entry = Json::parse(std::ifstream(file));
    entry["format_version"] = cache_format_version + 1;
    std::ofstream(file) << entry.dump();

    cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(stats.misses == 2);
    CHECK(stats.hits == 0);
}

TEST_CASE("cache: disabled config never writes")
{
    auto monoid = oracles::parse(fixtures::monoid);
    TempDir dir;
    CacheConfig config{dir.path, true};
    CacheStats stats;
    auto models = cache_get_or_compute(config, monoid, 2, false, {}, &stats);
    CHECK(models.size() == 5);
    CHECK(fs::is_empty(dir.path));
}

TEST_CASE("report JSON carries the documented fields")
{
    auto monoid = oracles::parse(fixtures::monoid);
    EnumerationOptions iso;
    iso.up_to_iso = true;
    auto models = enumerate_models(monoid, 2, iso);

    ReconstructionReport report = reconstruct_theory(monoid, 1, 1, 2, 3);
    Json rec = reconstruction_to_json(*monoid, report, models);
    for (const char * field : {"theory", "k", "depth", "models", "cells"})
        CHECK(rec.contains(field));
    for (const Json & cell : rec["cells"]) {
        for (const char * field : {"n", "m", "term_ops", "natural_count", "verdict", "witnesses"})
            CHECK(cell.contains(field));
        CHECK((cell["verdict"] == "EQUAL" || cell["verdict"] == "EXTRA_NATURAL" ||
            cell["verdict"] == "BOUND_EXCEEDED"));
    }

    auto candidates = parse_candidates("eq comm (x y) : mul(x,y) = mul(y,x)\n", *monoid);
    SieveReport sieve = sieve_candidates(candidates, models, 2);
    Json sv = sieve_report_to_json(sieve, candidates);
    for (const char * field : {"k", "surviving", "refuted", "duplicates"})
        CHECK(sv.contains(field));

    Json record = algebra_to_json(models.front());
    for (const char * field : {"theory", "theory_hash", "size", "tables"})
        CHECK(record.contains(field));
    CHECK(record["tables"]["e"].is_number_integer()); // constants are bare integers
    CHECK(record["tables"]["mul"].is_array());
}

TEST_CASE("hom records carry endpoint hashes")
{
    auto monoid = oracles::parse(fixtures::monoid);
    FiniteAlgebra z2{monoid, 2, {{0, 1, 1, 0}, {0}}};
    FiniteAlgebra orm{monoid, 2, {{0, 1, 1, 1}, {0}}};
    auto homs = enumerate_homs(z2, orm);
    REQUIRE(!homs.empty());
    Json record = hom_to_json(homs.front());
    CHECK(record["source"] == algebra_hash(z2));
    CHECK(record["target"] == algebra_hash(orm));
    CHECK(record["map"].get<std::vector<int>>() == homs.front().map);
}
