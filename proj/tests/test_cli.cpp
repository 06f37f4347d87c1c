#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqueue/ett.hpp"

using namespace uq;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + UQUEUE_BIN + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream cols(line);
        for (std::string cell; std::getline(cols, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

bool same_at_nine_digits(double parsed, double value) {
    return std::abs(parsed - value) <= 5e-9 * std::abs(value) + 1e-300;
}

}  // namespace

TEST_CASE("ett command") {
    const Run r = run("ett --lambda 3 --mu 4 --a 3 --b 7 --format csv");
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"order", "a", "b", "ett", "error_estimate"});
    CHECK(std::abs(std::stod(rows[1][3]) - 2.760732021) < 1e-6);

    const auto rev = parse_csv(run("ett --lambda 3 --mu 4 --a 7 --b 3 --format csv").out);
    CHECK(std::abs(std::stod(rev[1][3]) - 2.856035058) < 1e-6);

    const auto both = parse_csv(run("ett --lambda 3 --mu 4 --a 5 --b 5 --order both --format csv").out);
    REQUIRE(both.size() == 3);
    CHECK(both[1][3] == both[2][3]);
}

TEST_CASE("csv round trip at nine significant digits") {
    const Run r = run("curves --lambda 3 --mu 4 --i 0..7 --t-max 10 --steps 200");
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + 8 * 201);
    CHECK(rows[0] == std::vector<std::string>{"t", "i", "el"});
    const QueueParams q(3, 4);
    for (std::size_t k = 1; k < rows.size(); k += 37) {
        const double t = std::stod(rows[k][0]);
        const int i = std::stoi(rows[k][1]);
        CHECK(same_at_nine_digits(std::stod(rows[k][2]), expected_length(i, t, q)));
    }
}

TEST_CASE("compare command") {
    const auto rows = parse_csv(run("compare --lambda 9 --mu 10 --a 8 --b 9 --format csv").out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][6] == "recommendation");
    CHECK(rows[1][6] == "longer-first");
    CHECK(rows[1][7] == "Boundary");
    CHECK(std::abs(std::stod(rows[1][4]) - 4e-4) < 5e-5);
}

TEST_CASE("sweep command") {
    const Run r = run("sweep --lambda 3 --mu 4 --a 0..2 --b 0..2");
    REQUIRE(r.status == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "ett_ab", "ett_ba", "winner", "case"});
    const auto expected = sweep(QueueParams(3, 4), {0, 2}, {0, 2});
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (rows[k][0] == rows[k][1]) CHECK(rows[k][4] == "tie");
        CHECK(same_at_nine_digits(std::stod(rows[k][2]), expected[k - 1].ett_ab));
    }
}

TEST_CASE("json mirrors csv") {
    const Run csv = run("sweep --lambda 3 --mu 4 --a 1..2 --b 3 --format csv");
    const Run js = run("sweep --lambda 3 --mu 4 --a 1..2 --b 3 --format json");
    REQUIRE(js.status == 0);
    const auto rows = parse_csv(csv.out);
    const auto doc = nlohmann::json::parse(js.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == rows.size() - 1);
    for (std::size_t k = 0; k < doc.size(); ++k) {
        CHECK(doc[k]["a"].get<int>() == std::stoi(rows[k + 1][0]));
        CHECK(doc[k]["ett_ab"].get<double>() == std::stod(rows[k + 1][2]));
        CHECK(doc[k]["winner"].get<std::string>() == rows[k + 1][4]);
    }
}

TEST_CASE("simulate, pij and fluid commands") {
    const auto sim = parse_csv(run("simulate --lambda 3 --mu 4 --a 3 --b 7 --reps 20000 --seed 7 --format csv").out);
    REQUIRE(sim.size() == 2);
    CHECK(sim[0] == std::vector<std::string>{"mean", "std_error", "replications", "seed"});
    CHECK(sim[1][2] == "20000");
    CHECK(sim[1][3] == "7");
    CHECK(std::abs(std::stod(sim[1][0]) - 2.7607) < 4.0 * std::stod(sim[1][1]));
    const auto again = parse_csv(run("simulate --lambda 3 --mu 4 --a 3 --b 7 --reps 20000 --seed 7 --format csv").out);
    CHECK(again == sim);

    const auto over = run("simulate --lambda 5 --mu 4 --a 1 --b 1 --reps 1000 --method full");
    CHECK(over.status == 0);

    const auto pij = parse_csv(run("pij --lambda 3 --mu 4 --i 2 --j 3 --t 0.5 --format csv").out);
    CHECK(std::abs(std::stod(pij[1][3]) - 0.158988194017595) < 1e-6);

    const auto fluid = parse_csv(run("fluid --lambda 3 --mu 4 --a 500 --b 1000 --mode linear --format csv").out);
    CHECK(fluid[1][2] == "344.1875");
    const auto both = parse_csv(run("fluid --lambda 3 --mu 4 --a 3 --b 7 --format csv").out);
    CHECK(both[0].size() == 4);
}

TEST_CASE("out flag and tolerance overrides") {
    const auto path = std::filesystem::temp_directory_path() / "uqueue_cli_test.csv";
    std::filesystem::remove(path);
    REQUIRE(run("ett --lambda 3 --mu 4 --a 3 --b 7 --format csv --out " + path.string()).status == 0);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(parse_csv(text.str()).size() == 2);
    std::filesystem::remove(path);

    CHECK(run("ett --lambda 3 --mu 4 --a 3 --b 7", "UQUEUE_REL_TOL=1e-6").status == 0);
    CHECK(run("ett --lambda 3 --mu 4 --a 3 --b 7", "UQUEUE_REL_TOL=abc").status == 2);
    CHECK(run("ett --lambda 3 --mu 4 --a 3 --b 7 --tol 1e-12").status == 0);
    CHECK(run("pij --lambda 3 --mu 4 --i 200 --j 0 --t 1").status == 4);
}

TEST_CASE("exit codes") {
    CHECK(run("--help").status == 0);
    CHECK(run("").status == 2);
    CHECK(run("ett --lambda 3 --mu 4 --a 3").status == 2);
    CHECK(run("ett --lambda 3 --mu 4 --a 3 --b 7 --bogus").status == 2);
    CHECK(run("ett --lambda 3 --mu 4 --a 3 --b 7 --format xml").status == 2);
    CHECK(run("sweep --lambda 3 --mu 4 --a 5..1").status == 2);
    CHECK(run("ett --lambda 4 --mu 4 --a 3 --b 7").status == 3);
    CHECK(run("compare --lambda 5 --mu 4 --a 3 --b 7").status == 3);
    CHECK(run("pij --lambda 0 --mu 4 --i 1 --j 1 --t 1").status == 3);
    CHECK(run("fluid --lambda 3 --mu 4 --a 500 --b 1000").status == 4);
}
