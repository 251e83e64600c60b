#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace {
fs::path scratch()
{
    fs::path const dir = TEST_SCRATCH_DIR;
    fs::create_directories(dir);
    return dir;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Run
{
    int code;
    std::string err;
};

Run run(std::string const& args)
{
    auto const err = scratch() / "stderr.txt";
    std::string const cmd = std::string(DECOYQKD_PATH) + " " + args + " 2>" + err.string()
                            + " >" + (scratch() / "stdout.txt").string();
    int const status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

// section,pulse_type,quantity -> value
std::map<std::string, std::string> read_long_csv(fs::path const& p)
{
    std::map<std::string, std::string> out;
    std::stringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line))
    {
        auto const last = line.rfind(',');
        out[line.substr(0, last)] = line.substr(last + 1);
    }
    return out;
}

void write(fs::path const& p, std::string const& text)
{
    std::ofstream(p, std::ios::binary) << text;
}
}  // namespace

TEST_CASE("rate-scan output is byte-identical across runs")
{
    auto const a = scratch() / "scan_a.csv";
    auto const b = scratch() / "scan_b.csv";
    CHECK(run("rate-scan --l-step 5 --out " + a.string()).code == 0);
    CHECK(run("rate-scan --l-step 5 --workers 1 --out " + b.string()).code == 0);
    auto const text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("L_km,Q_s,E_sz,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 42);
}

TEST_CASE("rate-scan with config file; flags win")
{
    auto const cfg = scratch() / "scan.cfg";
    write(cfg, "[scan]\nl-min = 100\nl-max = 110\nl-step = 5\n[source]\nmu = 0.4\n");
    auto const from_cfg = scratch() / "cfg.csv";
    REQUIRE(run("rate-scan --config " + cfg.string() + " --out " + from_cfg.string()).code == 0);
    auto const text = slurp(from_cfg);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find("\n100,") != std::string::npos);

    auto const flagged = scratch() / "flag.csv";
    REQUIRE(run("rate-scan --config " + cfg.string() + " --l-max 100 --out " + flagged.string())
                .code
            == 0);
    auto const t2 = slurp(flagged);
    CHECK(std::count(t2.begin(), t2.end(), '\n') == 2);

    // mu = 0.4 from the config changes the rates
    auto const plain = scratch() / "plain.csv";
    REQUIRE(run("rate-scan --l-min 100 --l-max 110 --l-step 5 --out " + plain.string()).code == 0);
    CHECK(slurp(plain) != text);
}

TEST_CASE("config errors exit with 2 and name the line")
{
    auto const cfg = scratch() / "bad.cfg";
    write(cfg, "[scan]\nl-min = 0\nl-max = abc\n");
    auto const r = run("rate-scan --config " + cfg.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.cfg:3") != std::string::npos);
    CHECK(r.err.find("l-max") != std::string::npos);

    write(cfg, "[scan]\nbogus = 1\n");
    auto const unknown = run("rate-scan --config " + cfg.string());
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("bad.cfg:2") != std::string::npos);

    write(cfg, "just words\n");
    CHECK(run("rate-scan --config " + cfg.string()).code == 2);
}

TEST_CASE("invalid parameters exit with 2")
{
    CHECK(run("simulate --n-pulses 0").code == 2);
    CHECK(run("rate-scan --l-min 50 --l-max 10").code == 2);
    CHECK(run("rate-scan --l-step 0").code == 2);
    CHECK(run("rate-scan --nu1 0.001 --nu2 0.01").code == 2);
    CHECK(run("rate-scan --mode fancy").code == 2);
    CHECK(run("rate-scan --no-such-flag").code == 2);
    CHECK(run("simulate --attack pns --delta-db 0 --length 0 --eta 1").code == 2);
    CHECK(run("").code == 2);
}

TEST_CASE("I/O errors exit with 3 and name the path")
{
    auto const r = run("rate-scan --l-step 50 --out /nonexistent/dir/out.csv");
    CHECK(r.code == 3);
    CHECK(r.err.find("/nonexistent/dir/out.csv") != std::string::npos);
    CHECK(run("rate-scan --config /nonexistent/run.cfg").code == 3);
    CHECK(run("simulate --n-pulses 1000 --out /nonexistent/dir/sim.csv").code == 3);
}

TEST_CASE("verify prints a JSON summary")
{
    auto const out = scratch() / "verify.json";
    CHECK(run("verify encoding --out " + out.string()).code == 0);
    auto const j = nlohmann::json::parse(slurp(out));
    CHECK(j["passed"] == true);
    CHECK(j["suites"][0]["suite"] == "encoding");
    CHECK(j["suites"][0]["failures"].empty());

    CHECK(run("verify inequality").code == 0);
    CHECK(run("verify convexity").code == 0);
    CHECK(run("verify nonsense").code == 2);
}

TEST_CASE("simulate: honest audit passes at n = 1e7")
{
    auto const out = scratch() / "honest.csv";
    auto const r = run("simulate --n-pulses 10000000 --length 50 --seed 7 --strict --n-sigma 3 --out "
                       + out.string());
    CHECK(r.code == 0);
    auto const csv = read_long_csv(out);
    CHECK(csv.at("config,all,attack") == "none");
    CHECK(csv.at("tally,signal,sent") != "0");
    CHECK(csv.count("empirical,decoy1,gain") == 1);
    CHECK(csv.count("bounds,all,Y1_L") == 1);

    // same config, same bytes
    auto const again = scratch() / "honest2.csv";
    run("simulate --n-pulses 10000000 --length 50 --seed 7 --workers 1 --out " + again.string());
    CHECK(slurp(out) == slurp(again));
}

TEST_CASE("simulate: solved PNS loses key rate")
{
    auto const out = scratch() / "pns.csv";
    REQUIRE(run("simulate --attack pns --n-pulses 10000000 --length 50 --seed 7 --out "
                + out.string())
                .code
            == 0);
    auto const csv = read_long_csv(out);
    CHECK(csv.at("config,all,attack") == "pns");
    CHECK(std::stod(csv.at("rate,all,R_decoy")) < std::stod(csv.at("honest_rate,all,R_decoy")));
}

TEST_CASE("pulse counts accept integral scientific notation")
{
    auto const cfg = scratch() / "sci.cfg";
    auto const out = scratch() / "sci.csv";
    write(cfg, "[simulate]\nn-pulses = 2e5\n");
    REQUIRE(run("simulate --config " + cfg.string() + " --chunk-size 1e4 --out " + out.string()).code
            == 0);
    auto const csv = read_long_csv(out);
    CHECK(csv.at("config,all,n_pulses") == "200000");
    CHECK(run("simulate --n-pulses 1.5").code == 2);
    CHECK(run("simulate --n-pulses 2.5e-3").code == 2);
}
