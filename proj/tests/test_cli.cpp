#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stf/cli.hpp"

using namespace stf;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> records(const std::string& text) {
    std::vector<nlohmann::json> r;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) r.push_back(nlohmann::json::parse(line));
    return r;
}

}  // namespace

TEST(Cli, MultiplicityPrintsInteger) {
    Outcome r = cli({"multiplicity", "--group", "SL2", "--weight", "12", "--level", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1\n");
    EXPECT_EQ(cli({"multiplicity", "--group", "SL2", "--weight", "24", "--level", "1"}).out, "2\n");
    EXPECT_EQ(cli({"multiplicity", "--group", "SL2", "--weight", "14", "--level", "1", "--member", "D-"}).out, "0\n");
}

TEST(Cli, StructuredOutputIsDeterministic) {
    std::vector<std::string> args = {"--format", "structured", "--jobs", "3", "multiplicity", "--group", "SL2",
                                     "--weight", "22", "--level", "1", "--emit-terms"};
    Outcome a = cli(args), b = cli(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto recs = records(a.out);
    ASSERT_FALSE(recs.empty());
    bool saw_total = false;
    for (const auto& j : recs) EXPECT_TRUE(j.is_object());
    for (const auto& j : recs)
        if (j.dump().find("\"total\"") != std::string::npos) saw_total = true;
    EXPECT_TRUE(saw_total);
}

TEST(Cli, Lefschetz) {
    Outcome r = cli({"lefschetz", "--group", "SL2", "--weight", "24", "--level", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("-4"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"multiplicity", "--group", "SL2"}).code, 2);
    EXPECT_EQ(cli({"--tolerance", "0.5", "verify", "all"}).code, 2);
    EXPECT_EQ(cli({"--tolerance", "0", "verify", "all"}).code, 2);
    EXPECT_EQ(cli({"multiplicity", "--group", "SL2", "--weight", "2", "--level", "1"}).code, 1);
    EXPECT_EQ(cli({"multiplicity", "--group", "SL2", "--weight", "12", "--level", "5"}).code, 2);
    EXPECT_EQ(cli({"cbar", "table", "--type", "E8"}).code, 2);
    EXPECT_EQ(cli({"cbar", "table", "--type", "A2"}).code, 1);
}

TEST(Cli, CatalogValidate) {
    EXPECT_EQ(cli({"catalog", "validate"}).code, 0);
    auto path = std::filesystem::temp_directory_path() / "stf_cli_bad_endo.json";
    std::ofstream(path) << R"({"schema": "endo/1", "groups": [{"label": "G", "tamagawa": 0}], "data": [], "links": []})";
    Outcome r = cli({"catalog", "validate", path.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    std::filesystem::remove(path);
}

TEST(Cli, Tools) {
    Outcome t = cli({"cbar", "table", "--type", "B2", "--json"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_NO_THROW((void)nlohmann::json::parse(t.out.substr(0, t.out.rfind('}') + 1)));
    Outcome p = cli({"packet", "check", "--entry", "Sp4_ds"});
    EXPECT_EQ(p.code, 0) << p.err;
    Outcome c = cli({"char", "eval", "--group", "SU2", "--lambda", "3/2", "--turns", "0"});
    EXPECT_EQ(c.code, 0) << c.err;
    EXPECT_NE(c.out.find("3"), std::string::npos);
}

TEST(Cli, VerifyAll) {
    Outcome r = cli({"verify", "all"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
