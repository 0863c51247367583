#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "percolab/cli.hpp"
#include "percolab/exact.hpp"

using namespace percolab;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    std::vector<json> records;

    std::vector<json> of_kind(const std::string& kind) const
    {
        std::vector<json> out_records;
        for (const auto& r : records) {
            if (r["kind"] == kind) {
                out_records.push_back(r);
            }
        }
        return out_records;
    }
};

Run run(std::vector<std::string> args)
{
    Run r;
    std::ostringstream out;
    std::ostringstream err;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    const bool csv = std::find(args.begin(), args.end(), "csv") != args.end();
    if (!csv) {
        std::istringstream lines(r.out);
        for (std::string line; std::getline(lines, line);) {
            r.records.push_back(json::parse(line));
        }
    }
    return r;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cells.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.emplace_back();
        } else {
            cells.back() += ch;
        }
    }
    return cells;
}

}  // namespace

TEST_CASE("phi examples")
{
    const Run origin = run({"phi", "--p", "1/8"});
    CHECK(origin.records.at(0)["set"] == "box:0");
    CHECK(origin.of_kind("phi").at(0)["value"] == "1/2");

    const Run quarter = run({"phi", "--dim", "2", "--box", "0", "--p", "0.25", "--method", "exact"});
    CHECK(quarter.code == 0);
    CHECK(quarter.of_kind("phi").at(0)["value"] == "1/1");

    const Run zero = run({"phi", "--dim", "2", "--box", "0", "--p", "0.0"});
    CHECK(zero.code == 0);
    CHECK(zero.of_kind("phi").at(0)["value"] == "0/1");

    const Run grid = run({"phi", "--box", "1", "--p-grid", "0:1:5"});
    CHECK(grid.of_kind("phi").size() == 5);
    CHECK(grid.of_kind("phi").back()["value"] == "12/1");

    const Run mc = run({"phi", "--dim", "2", "--box", "1", "--p", "0.4", "--method", "mc", "--trials", "100000",
                        "--seed", "7"});
    REQUIRE(mc.code == 0);
    const json est = mc.of_kind("phi_estimate").at(0);
    const double exact = phi_exact(make_box(2, 1).set())(Rational(2, 5)).get_d();
    CHECK(std::abs(est["mean"].get<double>() - exact) <= 4 * est["std_error"].get<double>());
}

TEST_CASE("pc-bound examples")
{
    CHECK(run({"pc-bound", "--dim", "2", "--kmax", "0"}).of_kind("pc_lower_bound").at(0)["bound"] == "1/4");
    CHECK(run({"pc-bound", "--dim", "3", "--kmax", "0"}).of_kind("pc_lower_bound").at(0)["bound"] == "1/6");
    const Run one = run({"pc-bound", "--dim", "2", "--kmax", "1"});
    const Rational b = parse_rational(one.of_kind("pc_lower_bound").at(0)["bound"].get<std::string>());
    CHECK(b > Rational(1, 4));
    CHECK(b < Rational(1, 2));
    CHECK(one.of_kind("ladder_entry").size() == 2);
}

TEST_CASE("decay examples")
{
    const Run r = run({"decay", "--dim", "2", "--p", "0.2", "--box", "0", "--k-list", "1,2,3,4", "--trials", "20000",
                       "--seed", "5"});
    CHECK(r.code == 0);
    CHECK(r.of_kind("decay_certificate").at(0)["status"] == "accepted");
    const auto reach = r.of_kind("reach");
    REQUIRE(reach.size() == 4);
    const char* bounds[] = {"1/1", "4/5", "16/25", "64/125"};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(reach[i]["bound"] == bounds[i]);
        CHECK(reach[i]["within_bound"] == true);
    }

    const Run one = run({"decay", "--p", "1", "--box", "0", "--trials", "500", "--seed", "5"});
    CHECK(one.code == 0);
    CHECK(one.of_kind("decay_certificate").at(0)["status"] == "refused");
    for (const auto& rec : one.of_kind("reach")) {
        CHECK(rec["point"] == 1.0);
        CHECK_FALSE(rec.contains("bound"));
    }
}

TEST_CASE("meanfield examples")
{
    const Run r = run({"meanfield", "--dim", "2", "--p", "0.6", "--pc-ref", "0.5", "--n", "8", "--trials", "2000",
                       "--seed", "11"});
    CHECK(r.code == 0);
    CHECK(r.of_kind("meanfield").at(0)["floor"] == "1/3");
    CHECK(r.of_kind("meanfield").at(0)["pass"] == true);
    CHECK(run({"meanfield", "--p", "0.5", "--pc-ref", "0.5", "--seed", "1"}).code == 2);

    const Run d3 = run({"meanfield", "--dim", "3", "--p", "0.3", "--n", "3", "--trials", "200", "--seed", "1",
                        "--kmax-ref", "0"});
    CHECK(d3.code == 0);
    CHECK(d3.of_kind("meanfield").at(0)["pc_ref"] == "1/6");
    CHECK(d3.of_kind("meanfield").at(0)["pc_ref_source"].get<std::string>().find("overstates") !=
          std::string::npos);
}

TEST_CASE("verify examples")
{
    const Run ok = run({"verify", "--dim", "2", "--n", "1"});
    CHECK(ok.code == 0);
    CHECK(ok.of_kind("russo").at(0)["residual"] == "0/1");
    for (const auto& rec : ok.of_kind("blocking")) {
        CHECK(rec["residual"] == "0/1");
        CHECK(rec["pass"] == true);
    }
    for (const auto& rec : ok.of_kind("lemma")) {
        CHECK(rec["pass"] == true);
    }

    const Run zero = run({"verify", "--dim", "2", "--n", "0"});
    CHECK(zero.code == 0);
    CHECK(zero.of_kind("lemma").at(0)["status"] == "not_applicable");

    const Run big = run({"verify", "--dim", "2", "--n", "2"});
    CHECK(big.code == 3);
    CHECK(big.err.find("2^40 configurations") != std::string::npos);
}

TEST_CASE("certificate files verify through the CLI")
{
    const std::string path = "test_cli_certificate.json";
    CHECK(run({"pc-bound", "--kmax", "1", "--certificate-out", path}).code == 0);
    const Run good = run({"verify", "--certificate", path});
    CHECK(good.code == 0);
    CHECK(good.of_kind("certificate_check").at(0)["valid"] == true);

    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    json cert = json::parse(text);
    cert["bound"] = "1/2";
    cert["certified_below"] = "1/2";
    std::ofstream(path) << cert.dump();
    CHECK(run({"verify", "--certificate", path}).code == 4);
    std::remove(path.c_str());
}

TEST_CASE("exit codes for bad input")
{
    CHECK(run({"phi", "--box", "0"}).code == 2);
    CHECK(run({"phi", "--box", "0", "--p", "abc"}).code == 2);
    CHECK(run({"phi", "--p", "0.5", "--box", "-1"}).code == 2);
    CHECK(run({"phi", "--box", "0", "--set-file", "x", "--p", "0.5"}).code == 2);
    CHECK(run({"phi", "--set-file", "/nonexistent", "--p", "0.5"}).code == 2);
    CHECK(run({"nosuch"}).code == 2);
    CHECK(run({"phi", "--dim", "3", "--box", "1", "--p", "0.5"}).code == 3);
    CHECK(run({"decay", "--p", "0.3", "--box", "0", "--trials", "0", "--seed", "1"}).code == 2);
}

TEST_CASE("test mode requires a seed")
{
    const Run r = run({"meanfield", "--p", "0.6", "--n", "4", "--trials", "100", "--test-mode"});
    CHECK(r.code == 2);
    CHECK(r.err.find("seed") != std::string::npos);
    const Run free = run({"meanfield", "--p", "0.6", "--n", "4", "--trials", "100"});
    CHECK(free.code == 0);
    CHECK(free.err.find("seed") != std::string::npos);
}

TEST_CASE("output is byte-identical across worker counts")
{
    const std::vector<std::vector<std::string>> commands = {
        {"meanfield", "--p", "0.6", "--n", "12", "--trials", "5000", "--seed", "11"},
        {"decay", "--p", "0.35", "--box", "0", "--n-list", "2,4,6", "--trials", "5000", "--seed", "2"},
        {"phi", "--box", "1", "--p", "1/3", "--method", "mc", "--trials", "5000", "--seed", "9"},
    };
    for (auto cmd : commands) {
        cmd.push_back("--workers");
        cmd.push_back("1");
        const Run base = run(cmd);
        REQUIRE(base.code == 0);
        for (const char* w : {"4", "8"}) {
            cmd.back() = w;
            CHECK(run(cmd).out == base.out);
        }
    }
}

TEST_CASE("csv and json carry identical values")
{
    const std::vector<std::vector<std::string>> commands = {
        {"decay", "--p", "0.2", "--box", "0", "--trials", "3000", "--seed", "4"},
        {"verify", "--n", "1", "--p", "1/2"},
        {"pc-bound", "--kmax", "1"},
    };
    for (auto cmd : commands) {
        const Run j = run(cmd);
        cmd.push_back("--format");
        cmd.push_back("csv");
        const Run c = run(cmd);
        REQUIRE(j.code == c.code);

        std::istringstream lines(c.out);
        std::vector<std::vector<std::string>> rows;
        std::map<std::string, std::string> config;
        for (std::string line; std::getline(lines, line);) {
            if (line.rfind("# ", 0) == 0) {
                const auto eq = line.find('=');
                config[line.substr(2, eq - 2)] = line.substr(eq + 1);
            } else {
                rows.push_back(split_csv_line(line));
            }
        }
        REQUIRE(rows.size() == j.records.size());
        const auto& header = rows[0];
        for (auto& [key, value] : j.records[0].items()) {
            if (key == "format") {
                continue;
            }
            REQUIRE(config.count(key));
            const std::string cell = split_csv_line(config[key]).at(0);
            CHECK((value.is_string() ? json(cell) : json::parse(cell)) == value);
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const json& rec = j.records[i];
            REQUIRE(rows[i].size() == header.size());
            for (std::size_t col = 0; col < header.size(); ++col) {
                const std::string& cell = rows[i][col];
                if (!rec.contains(header[col])) {
                    CHECK(cell.empty());
                    continue;
                }
                const json& value = rec[header[col]];
                if (value.is_null()) {
                    CHECK(cell.empty());
                    continue;
                }
                CHECK((value.is_string() ? json(cell) : json::parse(cell)) == value);
            }
        }
    }
}
