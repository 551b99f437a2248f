#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "orbiqrr/cli.hpp"

using namespace orbiqrr;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    Outcome r = run(args);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    return Json::parse(r.out);
}

std::string data(const std::string& name) { return std::string(ORBIQRR_SOURCE_DIR) + "/demos/data/" + name; }

std::filesystem::path fresh_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("orbiqrr-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

class CacheEnv {
public:
    explicit CacheEnv(const std::filesystem::path& dir) { ::setenv("ORBIQRR_CACHE", dir.c_str(), 1); }
    ~CacheEnv() { ::unsetenv("ORBIQRR_CACHE"); }
};

}  // namespace

TEST(Cli, BernoulliPrintsExactValue) {
    Outcome r = run({"bernoulli", "--m", "2", "--x", "1/2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "-1/12\n");
    EXPECT_EQ(run({"bernoulli", "--m", "1"}).out, "-1/2\n");
    EXPECT_EQ(run_json({"bernoulli", "--m", "3", "--x", "1/3"})["value"], "1/27");
}

TEST(Cli, QuinticInvariantsTable) {
    Json doc = run_json({"invariants", "--target", "P4", "--bundle", "O5", "--max-degree", "2"});
    ASSERT_EQ(doc["rows"].size(), 2u);
    EXPECT_EQ(doc["rows"][0]["N"], "2875");
    EXPECT_EQ(doc["rows"][1]["N"], "4876875/8");
    EXPECT_EQ(doc["rows"][1]["n"], "609250");
}

TEST(Cli, TargetFileMatchesBuiltin) {
    Json a = run_json({"invariants", "--target", "P4", "--bundle", "O5", "--max-degree", "2"});
    Json b = run_json({"invariants", "--target", data("quintic_p4.json"), "--bundle", "O(5)", "--max-degree", "2"});
    EXPECT_EQ(a["rows"], b["rows"]);
}

TEST(Cli, InvalidTargetExitsWithInvariantViolation) {
    Outcome r = run({"target", "validate", data("bad_target.json")});
    EXPECT_EQ(r.code, 1);
    Json err = Json::parse(r.out);
    EXPECT_EQ(err["error"], "InvariantViolation");
    EXPECT_EQ(err["module"], "orbtarget");
    EXPECT_TRUE(err.contains("message"));
    EXPECT_EQ(run({"target", "validate", data("quintic_p4.json")}).code, 0);
}

TEST(Cli, DomainErrorsCarryModuleName) {
    Outcome r = run({"quantize", "--target", "point", "--B", "id", "--m", "0", "--K", "2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(Json::parse(r.out)["error"], "NotInfinitesimallySymplectic");
    EXPECT_EQ(Json::parse(r.out)["module"], "fockquant");
    r = run({"invariants", "--target", "P1", "--bundle", "O3", "--max-degree", "1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(Json::parse(r.out)["module"], "genus0");
    r = run({"bernoulli", "--m", "2", "--x", "1/"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(Json::parse(r.out)["error"], "ParseError");
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bernoulli"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"delta", "--target", "point", "--bundle", "O^1", "--zmax", "2"}).code, 2);
    EXPECT_EQ(run({"delta", "--target", "point", "--bundle", "O^1", "--zmax", "2", "--euler", "--s", "0"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "bernoulli", "--m", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OutputIsDeterministic) {
    const std::vector<std::string> args{"--format", "json", "delta", "--target", "Bmu3", "--bundle", "chi1", "--euler", "--zmax", "2"};
    EXPECT_EQ(run(args).out, run(args).out);
    const std::vector<std::string> csv{"--format", "csv", "mirror-map", "--target", "P4", "--bundle", "O5", "--max-degree", "2"};
    EXPECT_EQ(run(csv).out, "class,coeff,d,zpow\n1:1,770,1,0\n1:1,717825,2,0\n");
}

TEST(Cli, ChecksReportAndExit) {
    Json d = run_json({"delta", "--target", "WPS(1,1,2)", "--bundle", "O1", "--s", "0,1/2,-1/3,1/5", "--zmax", "3", "--check-symplectic"});
    EXPECT_TRUE(d["symplectic"]["holds"].get<bool>());
    EXPECT_TRUE(run_json({"check", "cocycle", "--K", "8", "--B1", "id", "--m1", "1", "--B2", "id", "--m2", "-1"})["rows"][0]["commutator"] == "-1/2");
    EXPECT_TRUE(run_json({"check", "cocycle", "--target", "Bmu2", "--K", "8", "--trials", "5"})["ok"].get<bool>());
    EXPECT_TRUE(run_json({"check", "string", "--nmax", "5"})["ok"].get<bool>());
    EXPECT_TRUE(run_json({"check", "serre", "--target", "Bmu2", "--bundle", "chi1", "--smax", "2", "--zmax", "3"})["ok"].get<bool>());
    EXPECT_TRUE(run_json({"check", "universal", "--kind", "trr", "--point-nmax", "6"})["ok"].get<bool>());
}

TEST(Cli, CorruptedTableFailsCheck) {
    Json table = table_json(point_table(6), "point");
    for (auto& e : table["entries"])
        if (e["insertions"].size() == 5) {
            e["value"] = "7";
            break;
        }
    const auto path = fresh_dir("table").string() + ".json";
    std::ofstream(path) << table.dump();
    Outcome r = run({"--format", "json", "check", "universal", "--kind", "string", "--table", path});
    EXPECT_EQ(r.code, 1);
    Json doc = Json::parse(r.out);
    EXPECT_EQ(doc["error"], "CheckFailed");
    EXPECT_FALSE(doc["failures"].empty());
    std::filesystem::remove(path);
}

TEST(Cache, ColdAndWarmRunsAreIdentical) {
    const auto dir = fresh_dir("warm");
    CacheEnv env(dir);
    const std::vector<std::string> args{"--format", "json", "ifunction", "--target", "P4", "--bundle", "O5", "--max-degree", "2"};
    Outcome cold = run(args), warm = run(args);
    EXPECT_NE(cold.err.find("cache miss"), std::string::npos);
    EXPECT_NE(warm.err.find("cache hit"), std::string::npos);
    EXPECT_EQ(cold.out, warm.out);
    std::filesystem::remove_all(dir);
}

TEST(Cache, TamperedEntryIsRecomputed) {
    const auto dir = fresh_dir("tamper");
    CacheEnv env(dir);
    const std::vector<std::string> args{"--format", "json", "invariants", "--target", "P4", "--bundle", "O5", "--max-degree", "2"};
    const Outcome cold = run(args);
    auto entry = std::filesystem::directory_iterator(dir)->path();
    Json stored = Json::parse(cli::detail::read_file(entry.string()));
    stored["payload"]["rows"][0]["N"] = "2876";
    std::ofstream(entry) << stored.dump();

    ResultCache cache(dir);
    EXPECT_THROW(cache.load(Json::parse(cli::detail::read_file(entry.string()))["key"]), CorruptCache);
    const Outcome again = run(args);
    EXPECT_NE(again.err.find("CorruptCache"), std::string::npos);
    EXPECT_EQ(again.out, cold.out);
    EXPECT_NE(run(args).err.find("cache hit"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cache, UnreadableEntryIsCorrupt) {
    const auto dir = fresh_dir("garbage");
    ResultCache cache(dir);
    const Json key{{"k", 1}};
    cache.store(key, Json{{"v", "1/2"}});
    std::ofstream(cache.entry_path(key)) << "{not json";
    EXPECT_THROW(cache.load(key), CorruptCache);
    int calls = 0;
    auto f = cache.fetch(key, [&] { ++calls; return Json{{"v", "1/2"}}; });
    EXPECT_EQ(f.status, CacheStatus::recovered);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(*cache.load(key), (Json{{"v", "1/2"}}));
    std::filesystem::remove_all(dir);
}

TEST(Cache, SchemaBumpInvalidatesEntries) {
    const auto dir = fresh_dir("schema");
    const Json key{{"command", "delta"}, {"zmax", 3}};
    ResultCache v1(dir, 1), v2(dir, 2);
    v1.store(key, Json{{"x", 1}});
    EXPECT_TRUE(v1.load(key).has_value());
    EXPECT_FALSE(v2.load(key).has_value());
    EXPECT_NE(v1.entry_path(key), v2.entry_path(key));
    int calls = 0;
    auto f = v2.fetch(key, [&] { ++calls; return Json{{"x", 2}}; });
    EXPECT_EQ(f.status, CacheStatus::miss);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ((*v1.load(key))["x"], 1);
    std::filesystem::remove_all(dir);
}

TEST(Cache, ReloadIsBitIdentical) {
    const auto dir = fresh_dir("bits");
    ResultCache cache(dir);
    const Json payload = loop_operator_json(build_bmu(3), delta_operator(build_bmu(3), character_bundle(build_bmu(3), 1), euler_s_values(1), 2));
    cache.store(Json{{"k", "delta"}}, payload);
    EXPECT_EQ(cache.load(Json{{"k", "delta"}})->dump(), payload.dump());
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::filesystem::remove_all(dir);
}
