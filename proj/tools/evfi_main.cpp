#include "evfi/errors.hpp"
#include "evfi/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 1;

int fail(int code, const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven frame interpolation with count-ratio flow masks"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Render a scene densely and write its event stream");
  std::string sim_scene, sim_out;
  double sim_threshold = evfi::kDefaultContrastThreshold;
  int sim_substeps = evfi::kDefaultSubsteps;
  sim->add_option("--scene", sim_scene, "Preset name or scene file")->required();
  sim->add_option("--threshold", sim_threshold, "Contrast threshold C on log intensity")->capture_default_str();
  sim->add_option("--substeps", sim_substeps, "Rendered samples between consecutive frame times")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "Output event file (.evs binary, .csv text)")->required();

  // interpolate: every flag is a string handed to RunConfig::set so config
  // files and flags share one parser. Flags override the config file.
  auto* interp = app.add_subcommand("interpolate", "Interpolate frames at the given taus");
  std::string config_path;
  std::map<std::string, std::string> flags;
  interp->add_option("--config", config_path, "key=value config file (flags override it)");
  const std::vector<std::pair<std::string, std::string>> interp_opts = {
      {"scene", "Preset or scene file; supplies oracle frames, events and flows when not given"},
      {"i0", "First frame (.pgm/.png)"},
      {"i1", "Second frame (.pgm/.png)"},
      {"events", "Event file (.evs/.csv)"},
      {"flows", "oracle, or f01.flo,f10.flo (default oracle)"},
      {"mode", "linear | scalar_event | directional_event (default directional_event)"},
      {"taus", "Comma-separated interpolation times (default 0.125,...,0.875)"},
      {"out", "Output directory (default out)"},
      {"threshold", "Contrast threshold for simulated events (default 0.15)"},
      {"substeps", "Rendered samples per frame interval for simulated events (default 32)"},
      {"smoothing_radius", "Box radius for event-count smoothing (default 2)"},
      {"blur_sigma", "Gaussian sigma in the motion-consistency loss (default 1.0)"},
      {"frame_ext", "pgm or png for written frames (default pgm)"},
      {"write_masks", "true to also write MSK1 mask files"},
  };
  for (const auto& [key, help] : interp_opts) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    interp->add_option(flag, flags[key], help);
  }

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Score predicted frames against ground truth frames");
  std::string pred_dir, gt_dir, report = "metrics.csv";
  eval->add_option("--pred", pred_dir, "Directory of predicted frames")->required();
  eval->add_option("--gt", gt_dir, "Directory of ground truth frames with matching names")->required();
  eval->add_option("--report", report, "Metrics CSV to write")->capture_default_str();

  // toy
  auto* toy = app.add_subcommand("toy", "Print a toy-example report");
  std::string toy_name;
  toy->add_option("name", toy_name, "butterfly1d | butterfly2d | curves")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*sim) {
      const auto stream = evfi::run_simulate(sim_scene, sim_threshold, sim_substeps, sim_out);
      std::cout << "wrote " << stream.events.size() << " events to " << sim_out << '\n';
    } else if (*interp) {
      evfi::RunConfig cfg;
      if (!config_path.empty()) evfi::apply_config_file(cfg, config_path);
      for (const auto& [key, help] : interp_opts) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (interp->count(flag) > 0) cfg.set(key, flags[key]);
      }
      const auto result = evfi::run_interpolate(cfg);
      for (const auto& m : result.metrics)
        std::cout << m.name << " tau " << *m.tau << "  psnr " << m.psnr << "  ssim " << m.ssim << "  ie " << m.ie
                  << "  mc " << m.mc_loss.value_or(0.0) << '\n';
      std::cout << "wrote " << result.written.size() << " files under " << cfg.out_dir << '\n';
    } else if (*eval) {
      const auto records = evfi::run_evaluate(pred_dir, gt_dir, report);
      for (const auto& m : records)
        std::cout << m.name << "  psnr " << m.psnr << "  ssim " << m.ssim << "  ie " << m.ie << '\n';
    } else if (*toy) {
      std::cout << evfi::run_toy(toy_name);
    }
  } catch (const evfi::IoError& e) {
    return fail(kExitIo, e);
  } catch (const evfi::FormatError& e) {
    return fail(kExitIo, e);
  } catch (const evfi::ArgumentError& e) {
    return fail(kExitValidation, e);
  } catch (const evfi::DomainError& e) {
    return fail(kExitValidation, e);
  } catch (const evfi::LookupError& e) {
    return fail(kExitValidation, e);
  } catch (const evfi::ValidationError& e) {
    return fail(kExitValidation, e);
  } catch (const std::exception& e) {
    return fail(kExitIo, e);
  }
  return 0;
}
