#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "zdsi/cli.hpp"

using namespace zdsi;

namespace {

const std::string kData = ZDSI_DATA_DIR;

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

Errc parse_code(const std::string& text)
{
    try {
        parse_problem(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for: " << text;
    return Errc::EmptyInput;
}

std::string parse_message(const std::string& text)
{
    try {
        parse_problem(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

const std::string kSmall = R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1/3"], ["2/3"]]})";

std::string tmp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

} // namespace

TEST(ProblemFile, LoadsShippedFixtures)
{
    auto p = load_problem(kData + "/pentagon.json");
    auto t = typewriter(5);
    EXPECT_EQ(p.pmf.matrix(), t.matrix());
    EXPECT_EQ(p.pmf.source().symbols(), t.source().symbols());
    EXPECT_EQ(p.name, "pentagon");
    EXPECT_FALSE(p.sxy.has_value());

    auto f = load_problem(kData + "/fully_connected_4.json");
    EXPECT_EQ(f.pmf.matrix(), fully_connected(4, Rational(1, 5)).matrix());

    auto s = load_problem(kData + "/split_channel.json");
    EXPECT_EQ(s.pmf.matrix(), split_channel(Rational(3, 10)).matrix());

    for (const auto& entry : std::filesystem::directory_iterator(kData))
        if (entry.path().extension() == ".json") {
            EXPECT_NO_THROW(load_problem(entry.path())) << entry.path();
        }
}

TEST(ProblemFile, MinimalDocumentDefaultsToHamming)
{
    auto p = parse_problem(kSmall);
    EXPECT_EQ(p.pmf.at(1, 0), Rational(2, 3));
    EXPECT_EQ(p.distortion.at(0, 1), Rational(1));
    EXPECT_EQ(p.distortion.at(1, 1), Rational(0));
    EXPECT_EQ(p.y_distortion().rows(), 1U);
}

TEST(ProblemFile, ZeroDenominatorIsParseErrorNamingTheEntry)
{
    std::string doc = R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1/0"], ["1"]]})";
    EXPECT_EQ(parse_code(doc), Errc::ParseError);
    EXPECT_NE(parse_message(doc).find("pmf[0][0]"), std::string::npos) << parse_message(doc);
}

TEST(ProblemFile, SumOfTwoIsValidationError)
{
    std::string doc = R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1"], ["1"]]})";
    EXPECT_EQ(parse_code(doc), Errc::ValidationError);
    EXPECT_NE(parse_message(doc).find("sum to 2"), std::string::npos);
}

TEST(ProblemFile, SyntaxErrorReportsPosition)
{
    std::string doc = "{\n  \"source_alphabet\": [\"a\",\n  oops]\n}";
    EXPECT_EQ(parse_code(doc), Errc::ParseError);
    EXPECT_NE(parse_message(doc).find("line 3"), std::string::npos) << parse_message(doc);
}

TEST(ProblemFile, StructuralErrors)
{
    EXPECT_EQ(parse_code(R"({"si_alphabet": ["u"], "pmf": [["1"]]})"), Errc::ParseError);
    EXPECT_NE(parse_message(R"({"si_alphabet": ["u"], "pmf": [["1"]]})").find("source_alphabet"), std::string::npos);
    // wrong row length
    auto bad_row = R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1/3", "0"], ["2/3"]]})";
    EXPECT_EQ(parse_code(bad_row), Errc::ValidationError);
    EXPECT_NE(parse_message(bad_row).find("pmf[0]"), std::string::npos);
    // negative entry
    EXPECT_EQ(parse_code(R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["-1/3"], ["4/3"]]})"),
              Errc::ValidationError);
    // duplicate labels
    EXPECT_EQ(parse_code(R"({"source_alphabet": ["a", "a"], "si_alphabet": ["u"], "pmf": [["1/3"], ["2/3"]]})"),
              Errc::ValidationError);
    // floats are not rationals
    EXPECT_EQ(parse_code(R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [[0.5], [0.5]]})"), Errc::ParseError);
    // non-Hamming reproduction without a matrix
    EXPECT_EQ(parse_code(R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1/3"], ["2/3"]],
                             "reproduction_alphabet": ["a", "b", "?"]})"),
              Errc::ValidationError);
    EXPECT_EQ(parse_code("[1, 2]"), Errc::ParseError);
    EXPECT_THROW(load_problem(tmp_path("zdsi-no-such-file.json")), Error);
}

TEST(ProblemFile, CustomDistortionAndSecondMatrix)
{
    auto p = parse_problem(R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u", "v"],
        "pmf": [["1/4", "1/4"], ["1/4", "1/4"]],
        "reproduction_alphabet": ["a", "b", "e"],
        "distortion": [["0", "1", "1/3"], ["1", "0", "1/3"]],
        "distortion_y": [["0", "2"], ["2", "0"]]})");
    EXPECT_EQ(p.distortion.cols(), 3U);
    EXPECT_EQ(p.distortion.at(1, 2), Rational(1, 3));
    ASSERT_TRUE(p.distortion_y.has_value());
    EXPECT_EQ(p.y_distortion().at(0, 1), Rational(2));
}

TEST(ProblemFile, EncoderSideInformation)
{
    auto p = load_problem(kData + "/encoder_si_binary.json");
    ASSERT_TRUE(p.sxy.has_value());
    EXPECT_EQ(p.sxy->first().size(), 2U);
    EXPECT_EQ(p.pmf.at(0, 0), Rational(3, 8));
    EXPECT_EQ(p.pmf.at(1, 1), Rational(3, 8));
    EXPECT_NO_THROW(validate(p.pmf));
    // Without S the helper supplies a constant one.
    auto q = parse_problem(kSmall);
    EXPECT_EQ(q.encoder_si().first().size(), 1U);
    EXPECT_EQ(marginal_xy(q.encoder_si()).matrix(), q.pmf.matrix());
}

TEST(ProblemFile, RoundTrip)
{
    for (const auto& name : {"pentagon", "c6", "fully-connected", "mt-binary", "split-channel"}) {
        auto a = make_example(name, 5, Rational(3, 10));
        auto b = parse_problem(format_problem(a));
        EXPECT_EQ(a.pmf.matrix(), b.pmf.matrix()) << name;
        EXPECT_EQ(a.pmf.source(), b.pmf.source());
        EXPECT_EQ(a.distortion.reproduction().symbols(), b.distortion.reproduction().symbols());
        EXPECT_EQ(a.name, b.name);
    }
    auto e = load_problem(kData + "/encoder_si_binary.json");
    auto f = parse_problem(format_problem(e));
    ASSERT_TRUE(f.sxy.has_value());
    EXPECT_EQ(f.sxy->tensor(), e.sxy->tensor());
}

TEST(Csv, Formatting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("{1,4}"), "\"{1,4}\"");
    EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
    EXPECT_EQ(format_number(Rational(7, 5), NumberFormat::Exact), "7/5");
    EXPECT_EQ(format_number(Rational(7, 5), NumberFormat::Float), "1.4");
    EXPECT_EQ(format_number(Rational(3), NumberFormat::Exact), "3");

    RDCurve<Rational> c{{{Rational(0), Rational(7, 5), 0}, {Rational(1, 2), Rational(0), 1}}};
    std::ostringstream ex, fl;
    write_curve_csv(ex, c, NumberFormat::Exact);
    write_curve_csv(fl, c, NumberFormat::Float);
    EXPECT_EQ(ex.str(), "D_num,D_den,R_num,R_den\n0,1,7,5\n1,2,0,1\n");
    EXPECT_EQ(fl.str(), "D,R\n0,1.4\n0.5,0\n");
}

TEST(Csv, CloudCarriesPartitionAndDecoder)
{
    auto cloud = rd_points(typewriter(5), DistortionMatrix::hamming(typewriter(5).source()));
    std::ostringstream os;
    write_cloud_csv(os, cloud, NumberFormat::Exact);
    std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "partition,D,R,codewords,decoder");
    EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), cloud.points.size() + 1);
    EXPECT_NE(s.find("\"{1,2,3,4,5}\",1/2,0,-,"), std::string::npos);
}

TEST(Cli, NumberArguments)
{
    EXPECT_EQ(cli::parse_number("3/10", "--p"), Rational(3, 10));
    EXPECT_EQ(cli::parse_number("0.125", "--D"), Rational(1, 8));
    EXPECT_EQ(cli::parse_number("-2", "--D"), Rational(-2));
    EXPECT_EQ(cli::parse_number("-0.5", "--D"), Rational(-1, 2));
    EXPECT_THROW(cli::parse_number("abc", "--D"), cli::UsageError);
    EXPECT_THROW(cli::parse_number("1/0", "--D"), cli::UsageError);
    EXPECT_THROW(cli::parse_number(".", "--D"), cli::UsageError);
    auto q = cli::parse_query("1/2,1,0.1,1/10");
    EXPECT_EQ(q[2], Rational(1, 10));
    EXPECT_THROW(cli::parse_query("1,2,3"), cli::UsageError);
    EXPECT_THROW(cli::parse_query("1,2,3,4,5"), cli::UsageError);
}

TEST(Cli, SolveRiPentagon)
{
    auto r = invoke({"solve-ri", "--example", "pentagon"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "L_Y = 7/5");
    EXPECT_NE(r.out.find("colors = 4"), std::string::npos);
    EXPECT_NE(r.out.find("symbol,probability,codeword,color"), std::string::npos);
    auto f = invoke({"solve-ri", "--example", "pentagon", "--format", "float"});
    EXPECT_EQ(f.out.substr(0, f.out.find('\n')), "L_Y = 1.4");
}

TEST(Cli, RdCurveFullyConnected)
{
    auto r = invoke({"rd-curve", "--example", "fully-connected", "--M", "5", "--p", "3/10"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "D_num,D_den,R_num,R_den\n0,1,12,5\n3,10,0,1\n");
    auto q = invoke({"rd-curve", "--example", "pentagon", "--D", "1/20"});
    EXPECT_EQ(q.out, "D,R\n1/20,6/5\n");
}

TEST(Cli, MtRegionQuery)
{
    auto yes = invoke({"mt-region", "--example", "mt-binary", "--query", "0,1,0,0"});
    ASSERT_EQ(yes.code, 0) << yes.err;
    EXPECT_EQ(yes.out.substr(0, yes.out.find('\n')), "achievable: yes (order YX)");
    auto no = invoke({"mt-region", "--example", "mt-binary", "--query", "0,0,0,0"});
    EXPECT_EQ(no.out, "achievable: no\n");
    auto file = invoke({"mt-region", "--file", kData + "/mt_correlated_3.json", "--query", "1/2,1,1/10,1/10"});
    EXPECT_EQ(file.code, 0);
    EXPECT_EQ(file.out.rfind("achievable: ", 0), 0U);
    auto mixed = invoke({"mt-region", "--example", "mt-binary", "--query", "1/2,1/2,0,0", "--mix-orders"});
    EXPECT_EQ(mixed.out.substr(0, mixed.out.find('\n')), "achievable: yes");
}

TEST(Cli, ThinAdapters)
{
    auto spec = make_example("fully-connected", 4, Rational(1, 5));
    {
        std::ostringstream lib;
        write_curve_csv(lib, rd_curve(spec.pmf, spec.distortion), NumberFormat::Float);
        EXPECT_EQ(invoke({"rd-curve", "--example", "fully-connected", "--format", "float"}).out, lib.str());
    }
    {
        std::ostringstream lib;
        write_curve_csv(lib, causal_rd_curve(spec.pmf, spec.distortion));
        EXPECT_EQ(invoke({"causal-curve", "--example", "fully-connected"}).out, lib.str());
    }
    {
        auto plan = build_plan(rd_points(spec.pmf, spec.distortion), Rational(1, 10));
        std::ostringstream lib;
        write_sim_csv(lib, run_simulation(plan, 3000, 5));
        EXPECT_EQ(invoke({"simulate-stream", "--example", "fully-connected", "--D", "1/10", "--n", "3000", "--seed", "5"}).out,
                  lib.str());
    }
    {
        auto mt = make_example("mt-binary");
        std::ostringstream lib;
        write_region_csv(lib, enumerate_mt_points(mt.pmf, mt.distortion, mt.y_distortion()), NumberFormat::Exact);
        EXPECT_EQ(invoke({"mt-region", "--example", "mt-binary"}).out, lib.str());
    }
    {
        auto mt = make_example("mt-binary");
        SchemeConfig cfg;
        cfg.D = 0.125;
        cfg.n = 16;
        cfg.trials = 40;
        cfg.seed = 3;
        cfg.mode = RateMode::Variable;
        std::ostringstream lib;
        write_scheme_csv(lib, simulate_scheme(marginal_source(mt.pmf), mt.distortion, cfg));
        EXPECT_EQ(invoke({"simulate-seq", "--example", "mt-binary", "--D", "1/8", "--n", "16", "--trials", "40", "--seed", "3", "--mode",
                       "variable"})
                      .out,
                  lib.str());
    }
    {
        auto e = load_problem(kData + "/encoder_si_binary.json");
        std::ostringstream lib;
        write_curve_csv(lib, encoder_si_rd_curve(*e.sxy, e.distortion), NumberFormat::Exact);
        EXPECT_EQ(invoke({"encoder-si-curve", "--file", kData + "/encoder_si_binary.json"}).out, lib.str());
    }
}

TEST(Cli, TraceAndPrefixExperiment)
{
    auto t = invoke({"simulate-stream", "--example", "pentagon", "--D", "0", "--n", "6", "--trace"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_NE(t.out.find("\nt,x,y,z,codeword,xhat\n"), std::string::npos);
    EXPECT_EQ(std::count(t.out.begin(), t.out.end(), '\n'), 2 + 1 + 1 + 6);

    auto p = invoke({"simulate-seq", "--example", "mt-binary", "--R", "1/4", "--alpha", "0.5", "--trials", "200"});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_NE(p.out.find("\n0.5,24,0.25,"), std::string::npos) << p.out;
    EXPECT_EQ(invoke({"simulate-seq", "--example", "mt-binary", "--R", "1/4"}).code, 2);
}

TEST(Cli, ExamplesAndOutFile)
{
    auto list = invoke({"examples"});
    EXPECT_EQ(list.code, 0);
    for (const auto& e : example_catalog()) EXPECT_NE(list.out.find(e.name + ": "), std::string::npos);

    auto path = tmp_path("zdsi-cli-out.json");
    std::filesystem::remove(path);
    auto w = invoke({"examples", "--example", "c6", "--out", path});
    EXPECT_EQ(w.code, 0);
    EXPECT_TRUE(w.out.empty());
    EXPECT_EQ(load_problem(path).pmf.matrix(), typewriter(6).matrix());
    std::filesystem::remove(path);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"no-such-command"}).code, 2);
    EXPECT_EQ(invoke({"solve-ri"}).code, 2);
    EXPECT_EQ(invoke({"solve-ri", "--example", "heptagon"}).code, 2);
    EXPECT_EQ(invoke({"solve-ri", "--example", "pentagon", "--file", kData + "/c6.json"}).code, 2);
    EXPECT_EQ(invoke({"rd-curve", "--example", "pentagon", "--D", "x"}).code, 2);
    EXPECT_EQ(invoke({"simulate-stream", "--example", "pentagon"}).code, 2);
    EXPECT_EQ(invoke({"solve-ri", "--help"}).code, 0);

    auto below = invoke({"rd-curve", "--example", "pentagon", "--D", "-1"});
    EXPECT_EQ(below.code, 1);
    EXPECT_TRUE(below.out.empty());
    EXPECT_NE(below.err.find("BelowMinimumDistortion"), std::string::npos);
    EXPECT_EQ(invoke({"solve-ri", "--file", tmp_path("zdsi-missing.json")}).code, 1);
    EXPECT_EQ(invoke({"rd-curve", "--example", "fully-connected", "--p", "1"}).code, 1);

    auto bad = tmp_path("zdsi-bad.json");
    std::ofstream(bad) << R"({"source_alphabet": ["a", "b"], "si_alphabet": ["u"], "pmf": [["1/0"], ["1"]]})";
    auto r = invoke({"solve-ri", "--file", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("ParseError"), std::string::npos);
    std::filesystem::remove(bad);
}

TEST(Cli, BinaryExitStatus)
{
    auto status = [](const std::string& args) {
        std::string cmd = std::string(ZDSI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("solve-ri --example pentagon"), 0);
    EXPECT_EQ(status("rd-curve --example pentagon --D -1"), 1);
    EXPECT_EQ(status("frobnicate"), 2);

    FILE* pipe = popen((std::string(ZDSI_CLI_PATH) + " solve-ri --example pentagon").c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char line[64] = {};
    ASSERT_NE(fgets(line, sizeof line, pipe), nullptr);
    pclose(pipe);
    EXPECT_STREQ(line, "L_Y = 7/5\n");
}
