// End-to-end tests against the built CLI binary: exit-code contract,
// determinism of outputs, CSV headers, image round-trips and help text.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "chaoslab/image.hpp"

namespace fs = std::filesystem;

#ifndef CHAOSLAB_CLI_PATH
#error "CHAOSLAB_CLI_PATH must point at the built binary"
#endif

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("chaoslab_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

int run(const std::string& args, const std::string& capture_path = "") {
    std::string cmd = std::string(CHAOSLAB_CLI_PATH) + " " + args;
    if (!capture_path.empty()) cmd += " >" + capture_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("generate: row count, header, determinism across processes") {
    TempDir tmp;
    const std::string base =
        "--out " + tmp.path.string() + " generate --r1 0.01 --r2 0.3 --x0 0.03 -n 500";
    CHECK(run(base + " -o a.csv", tmp.file("log1")) == 0);
    CHECK(run(base + " -o b.csv", tmp.file("log2")) == 0);

    const std::string a = read_file(tmp.file("a.csv"));
    const std::string b = read_file(tmp.file("b.csv"));
    CHECK(a == b);  // bit-identical across two processes
    CHECK(first_line(a) == "step,x");
    CHECK(count_lines(a) == 501);  // header + 500 rows
    CHECK(a.find("\r") == std::string::npos);
}

TEST_CASE("analyze subcommands write the documented headers") {
    TempDir tmp;
    const std::string out = "--out " + tmp.path.string() + " ";
    CHECK(run(out + "analyze histogram -n 5000 --bins 25", tmp.file("l1")) == 0);
    CHECK(first_line(read_file(tmp.file("histogram.csv"))) == "bin_lo,bin_hi,count");
    CHECK(count_lines(read_file(tmp.file("histogram.csv"))) == 26);

    CHECK(run(out + "analyze lyapunov --points 3 --iters 1500 --x0 0.5",
              tmp.file("l2")) == 0);
    const std::string lyap = read_file(tmp.file("lyapunov.csv"));
    CHECK(first_line(lyap) == "r1,r2,lambda,n_iters");
    CHECK(count_lines(lyap) == 4);
    CHECK(lyap.find("inf") == std::string::npos);  // lambda column all finite
    CHECK(lyap.find("nan") == std::string::npos);

    CHECK(run(out + "analyze bifurcation --sweep r2 --range 0,1 --points 4 "
                    "--burn-in 50 --keep 6",
              tmp.file("l3")) == 0);
    CHECK(first_line(read_file(tmp.file("bifurcation.csv"))) == "r,x");
    CHECK(count_lines(read_file(tmp.file("bifurcation.csv"))) == 25);

    CHECK(run(out + "analyze sensitivity --target x0 --delta 1e-16 --horizon 40",
              tmp.file("l4")) == 0);
    CHECK(first_line(read_file(tmp.file("sensitivity.csv"))) ==
          "step,x_base,x_pert,gap");
    CHECK(count_lines(read_file(tmp.file("sensitivity.csv"))) == 41);

    CHECK(run(out + "analyze cobweb -n 30", tmp.file("l5")) == 0);
    CHECK(first_line(read_file(tmp.file("cobweb.csv"))) ==
          "x_from,y_from,x_to,y_to");
    CHECK(count_lines(read_file(tmp.file("cobweb.csv"))) == 61);
}

TEST_CASE("exit codes: config errors are 2") {
    TempDir tmp;
    // malformed config file, with a line number in the message
    std::ofstream(tmp.file("bad.json")) << "{\n  \"map\": { oops }\n}\n";
    CHECK(run("--config " + tmp.file("bad.json") + " generate -n 10",
              tmp.file("log")) == 2);
    const std::string log = read_file(tmp.file("log"));
    CHECK(log.find(":2:") != std::string::npos);

    // invalid flag values
    CHECK(run("generate --x0 1.5 -n 10 --out " + tmp.path.string(),
              tmp.file("log2")) == 2);
    CHECK(run("analyze lyapunov --d0 1e-3 --out " + tmp.path.string(),
              tmp.file("log3")) == 2);
    // unknown subcommand / flag
    CHECK(run("frobnicate", tmp.file("log4")) == 2);
    CHECK(run("generate --no-such-flag", tmp.file("log5")) == 2);
    // unknown config file
    CHECK(run("--config /nonexistent.json generate", tmp.file("log6")) == 2);
}

TEST_CASE("exit codes: io errors are 3, format errors are 4") {
    TempDir tmp;
    chaoslab::ImageBuffer img = chaoslab::synthetic_photo(16, 16, 3);
    chaoslab::write_pnm(tmp.file("img.ppm"), img);

    // unwritable output path -> 3
    CHECK(run("encrypt -i " + tmp.file("img.ppm") +
                  " -o /nonexistent_dir/out.ppm",
              tmp.file("log1")) == 3);
    // missing input -> 3
    CHECK(run("encrypt -i " + tmp.file("none.ppm") + " -o " + tmp.file("o.ppm"),
              tmp.file("log2")) == 3);

    // not an image -> 4
    std::ofstream(tmp.file("text.ppm")) << "hello world";
    CHECK(run("encrypt -i " + tmp.file("text.ppm") + " -o " + tmp.file("o.ppm"),
              tmp.file("log3")) == 4);
    // truncated PPM header -> 4
    std::ofstream(tmp.file("trunc.ppm"), std::ios::binary) << "P6\n16 ";
    CHECK(run("encrypt -i " + tmp.file("trunc.ppm") + " -o " + tmp.file("o.ppm"),
              tmp.file("log4")) == 4);
    // unsupported output extension -> 4
    CHECK(run("encrypt -i " + tmp.file("img.ppm") + " -o " + tmp.file("o.bmp"),
              tmp.file("log5")) == 4);
}

TEST_CASE("encrypt/decrypt round-trips through files") {
    TempDir tmp;
    chaoslab::ImageBuffer img = chaoslab::synthetic_photo(24, 18, 3);
    chaoslab::write_pnm(tmp.file("in.ppm"), img);

    CHECK(run("encrypt -i " + tmp.file("in.ppm") + " -o " + tmp.file("enc.ppm"),
              tmp.file("log1")) == 0);
    CHECK(run("decrypt -i " + tmp.file("enc.ppm") + " -o " + tmp.file("dec.ppm"),
              tmp.file("log2")) == 0);
    CHECK(read_file(tmp.file("dec.ppm")) == read_file(tmp.file("in.ppm")));
    CHECK(read_file(tmp.file("enc.ppm")) != read_file(tmp.file("in.ppm")));

    // PNG in, PNG out, same dimensions
    chaoslab::write_png(tmp.file("in.png"), img);
    CHECK(run("encrypt -i " + tmp.file("in.png") + " -o " + tmp.file("enc.png"),
              tmp.file("log3")) == 0);
    chaoslab::ImageBuffer enc = chaoslab::read_png(tmp.file("enc.png"));
    CHECK(enc.width == img.width);
    CHECK(enc.height == img.height);
    CHECK(enc.channels == img.channels);

    // a different nonce decrypts to garbage, same nonce round-trips
    CHECK(run("--seed-nonce 9 encrypt -i " + tmp.file("in.ppm") + " -o " +
                  tmp.file("enc9.ppm"),
              tmp.file("log4")) == 0);
    CHECK(run("--seed-nonce 9 decrypt -i " + tmp.file("enc9.ppm") + " -o " +
                  tmp.file("dec9.ppm"),
              tmp.file("log5")) == 0);
    CHECK(read_file(tmp.file("dec9.ppm")) == read_file(tmp.file("in.ppm")));
    CHECK(read_file(tmp.file("enc9.ppm")) != read_file(tmp.file("enc.ppm")));
}

TEST_CASE("metrics command writes per-channel rows plus an average row") {
    TempDir tmp;
    chaoslab::write_pnm(tmp.file("img.ppm"), chaoslab::synthetic_photo(24, 24, 3));
    CHECK(run("--out " + tmp.path.string() + " metrics -i " + tmp.file("img.ppm") +
                  " --trials 2",
              tmp.file("log")) == 0);
    const std::string csv = read_file(tmp.file("metrics.csv"));
    CHECK(first_line(csv) == "channel,npcr,uaci");
    CHECK(count_lines(csv) == 5);  // header + r,g,b + average
    CHECK(csv.find("\nr,") != std::string::npos);
    CHECK(csv.find("\naverage,") != std::string::npos);

    // 1x1 grayscale, 1 trial: the single pixel always flips -> NPCR 100
    chaoslab::ImageBuffer tiny = chaoslab::ImageBuffer::make(1, 1, 1);
    chaoslab::write_pnm(tmp.file("tiny.pgm"), tiny);
    CHECK(run("--out " + tmp.path.string() + " metrics -i " + tmp.file("tiny.pgm") +
                  " --trials 1 -o tiny.csv",
              tmp.file("log2")) == 0);
    const std::string tiny_csv = read_file(tmp.file("tiny.csv"));
    CHECK(tiny_csv.find("gray,100,") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
    TempDir tmp;
    std::ofstream(tmp.file("cfg.json"))
        << R"({ "map": { "r1": 0.2, "x0": 0.4 }, "analysis": { "iterations": 7 } })";
    CHECK(run("--config " + tmp.file("cfg.json") + " --out " + tmp.path.string() +
                  " generate -o a.csv",
              tmp.file("log1")) == 0);
    CHECK(count_lines(read_file(tmp.file("a.csv"))) == 8);  // file's n = 7

    CHECK(run("--config " + tmp.file("cfg.json") + " --out " + tmp.path.string() +
                  " generate -n 3 -o b.csv",
              tmp.file("log2")) == 0);
    CHECK(count_lines(read_file(tmp.file("b.csv"))) == 4);  // flag wins

    // same map parameters -> same first sample regardless of how configured
    CHECK(run("--out " + tmp.path.string() +
                  " generate --r1 0.2 --x0 0.4 -n 3 -o c.csv",
              tmp.file("log3")) == 0);
    CHECK(first_line(read_file(tmp.file("b.csv")).substr(7)) ==
          first_line(read_file(tmp.file("c.csv")).substr(7)));
}

TEST_CASE("help text lists every subcommand and shows defaults") {
    TempDir tmp;
    CHECK(run("--help", tmp.file("help")) == 0);
    const std::string help = read_file(tmp.file("help"));
    for (const char* sub :
         {"generate", "analyze", "encrypt", "decrypt", "metrics", "repro"})
        CHECK(help.find(sub) != std::string::npos);

    CHECK(run("generate --help", tmp.file("gh")) == 0);
    const std::string gh = read_file(tmp.file("gh"));
    CHECK(gh.find("--r1") != std::string::npos);
    CHECK(gh.find("--x0") != std::string::npos);
    CHECK(gh.find("[0.01]") != std::string::npos);  // default shown

    CHECK(run("analyze --help", tmp.file("ah")) == 0);
    const std::string ah = read_file(tmp.file("ah"));
    for (const char* sub :
         {"lyapunov", "bifurcation", "histogram", "sensitivity", "cobweb"})
        CHECK(ah.find(sub) != std::string::npos);

    CHECK(run("analyze lyapunov --help", tmp.file("lh")) == 0);
    CHECK(read_file(tmp.file("lh")).find("--d0") != std::string::npos);
}

TEST_CASE("repro runs a single pinned target") {
    TempDir tmp;
    CHECK(run("--out " + tmp.path.string() + " repro --only fig4",
              tmp.file("log")) == 0);
    CHECK(fs::exists(tmp.path / "fig4" / "sensitivity_x0.csv"));
    CHECK(fs::exists(tmp.path / "fig4" / "sensitivity_r1.csv"));
    const std::string csv = read_file((tmp.path / "fig4" / "sensitivity_x0.csv").string());
    CHECK(first_line(csv) == "step,x_base,x_pert,gap");
    CHECK(count_lines(csv) == 101);

    CHECK(run("repro --only fig9", tmp.file("bad")) == 2);
}

TEST_CASE("repro produces the full pinned output tree") {
    TempDir tmp;
    CHECK(run("--out " + tmp.path.string() + " repro --trials 2",
              tmp.file("log")) == 0);
    for (const char* rel :
         {"fig2/histogram.csv", "fig3/cobweb_r1_0.01_r2_0.3_x0_0.2.csv",
          "fig3/cobweb_r1_0.3_r2_0.01_x0_0.6.csv", "fig4/sensitivity_x0.csv",
          "fig5/bifurcation_r1_x0_0.5.csv", "fig5/bifurcation_r2_x0_0.2.csv",
          "fig6/lyapunov_r1.csv", "fig6/lyapunov_r2.csv",
          "table1/synthetic_256x256.ppm", "table1/metrics_synthetic.csv"})
        CHECK(fs::exists(tmp.path / rel));
    CHECK(count_lines(read_file((tmp.path / "fig6" / "lyapunov_r1.csv").string())) ==
          51);
    CHECK(count_lines(read_file((tmp.path / "fig5" / "bifurcation_r1_x0_0.5.csv").string())) ==
          500 * 200 + 1);
}
