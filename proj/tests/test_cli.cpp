#include "evfi/io.hpp"

#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / ("evfi_cli_" + std::to_string(::getpid()));

int run(const std::string& args) {
  const std::string cmd = std::string(EVFI_CLI) + " " + args + " >" + (kDir / "stdout.txt").string() + " 2>" +
                          (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string p(const std::string& name) { return (kDir / name).string(); }

std::string slurp(const std::string& name) {
  std::ifstream in(p(name));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Scratch {
  Scratch() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
  ~Scratch() { fs::remove_all(kDir); }
};

}  // namespace

TEST_CASE("simulate, interpolate, evaluate") {
  Scratch s;
  CHECK(run("simulate --scene butterfly2d --threshold 0.15 --substeps 32 --out " + p("ev.evs")) == 0);
  CHECK(run("simulate --scene butterfly2d --out " + p("ev.csv")) == 0);
  CHECK(evfi::read_events(p("ev.evs")).events == evfi::read_events(p("ev.csv")).events);

  CHECK(run("interpolate --scene butterfly2d --mode linear --taus 0.25,0.5 --out " + p("lin")) == 0);
  CHECK(fs::exists(p("lin/frame_01.pgm")));
  CHECK(fs::exists(p("lin/frame_02.pgm")));
  CHECK(fs::exists(p("lin/metrics.csv")));

  CHECK(run("interpolate --i0 " + p("lin/gt/frame_01.pgm") + " --i1 " + p("lin/gt/frame_02.pgm") + " --events " +
            p("ev.evs") + " --flows oracle --mode scalar_event --out " + p("x")) == 2);

  CHECK(run("evaluate --pred " + p("lin") + " --gt " + p("lin/gt") + " --report " + p("report.csv")) == 0);
  CHECK(slurp("report.csv").rfind("name,tau,psnr,ssim,ie,mc_loss\n", 0) == 0);
}

TEST_CASE("config file with flag override") {
  Scratch s;
  {
    std::ofstream cfg(p("run.cfg"));
    cfg << "scene=butterfly2d\nmode=directional_event\ntaus=0.5\nout=" << p("from_file") << "\n";
  }
  CHECK(run("interpolate --config " + p("run.cfg") + " --out " + p("from_flag")) == 0);
  CHECK(fs::exists(p("from_flag/frame_01.pgm")));
  CHECK(!fs::exists(p("from_file")));
}

TEST_CASE("toy") {
  Scratch s;
  CHECK(run("toy butterfly1d") == 0);
  CHECK(slurp("stdout.txt").find("omega_0t 0.000, omega_1t 1.000") != std::string::npos);
  CHECK(run("toy curves") == 0);
  CHECK(run("toy moth") == 2);
}

TEST_CASE("exit codes") {
  Scratch s;
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("interpolate --scene butterfly2d --taus 0.5,0.25 --out " + p("o")) == 2);
  CHECK(run("interpolate --scene butterfly2d --taus 1.5 --out " + p("o")) == 2);
  CHECK(run("interpolate --scene butterfly2d --mode sideways --out " + p("o")) == 2);
  CHECK(run("simulate --scene nowhere --out " + p("e.evs")) == 2);
  CHECK(run("simulate --scene butterfly2d --threshold -1 --out " + p("e.evs")) == 2);
  CHECK(run("evaluate --pred " + p("none") + " --gt " + p("none") + " --report " + p("r.csv")) == 1);
  CHECK(run("interpolate --i0 " + p("missing.pgm") + " --i1 " + p("missing.pgm") +
            " --flows a.flo,b.flo --mode linear --out " + p("o")) == 1);
  {
    std::ofstream bad(p("bad.pgm"), std::ios::binary);
    bad << "P5\n2 2\n65535\n";
  }
  CHECK(run("interpolate --i0 " + p("bad.pgm") + " --i1 " + p("bad.pgm") + " --flows a.flo,b.flo --mode linear --out " +
            p("o")) == 1);
  CHECK(slurp("stderr.txt").find("bit depth") != std::string::npos);
  {
    std::ofstream bad(p("bad.csv"));
    bad << "# width=4 height=4 t_start=0 t_end=1\nx,y,t,p\n7,1,0.5,1\n";
  }
  CHECK(run("interpolate --scene butterfly2d --events " + p("bad.csv") + " --out " + p("o")) == 2);
  CHECK(slurp("stderr.txt").find("event 0") != std::string::npos);
}
