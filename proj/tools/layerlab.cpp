#include <CLI11.hpp>

#include <iostream>

#include "layerlab/cli.hpp"

int main(int argc, char** argv) {
  layerlab::RunConfig cfg;
  CLI::App app{"layerlab: layered-media scattering toolkit"};
  app.require_subcommand(1, 1);

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.input, "medium JSON ({C,X} or {w,tau})");
    sub->add_option("--out", cfg.output, "output file (.json for JSON, otherwise CSV)");
    sub->add_flag("--renormalize", cfg.renormalize, "rescale C so that it sums to 1");
  };
  auto add_T = [&](CLI::App* sub) { sub->add_option("--T", cfg.T, "time horizon as NUM/DEN or decimal"); };

  auto* synth = app.add_subcommand("synth", "boundary Green's function as a delta train");
  add_io(synth);
  add_T(synth);

  auto* spectrum = app.add_subcommand("spectrum", "partial-sum spectrum against the backward recurrence");
  add_io(spectrum);
  add_T(spectrum);
  spectrum->add_option("--sigma-max", cfg.sigma_max, "largest angular frequency");
  spectrum->add_option("--sigma-n", cfg.sigma_n, "number of frequencies");
  spectrum->add_flag("--tail-check", cfg.tail_check, "also report the error at 2T");

  auto* oracle = app.add_subcommand("oracle-check", "compare with the series oracle");
  add_io(oracle);
  add_T(oracle);
  oracle->add_option("--seed", cfg.seed, "seed for the random medium");
  oracle->add_option("--n", cfg.layers, "layers of the random medium");
  oracle->add_flag("--inject-mismatch", cfg.inject_mismatch)->group("");

  auto* poly = app.add_subcommand("poly", "scattering polynomial tables and eigen-check");
  poly->add_option("--out", cfg.output, "output file");
  poly->add_option("--p-max", cfg.p_max, "largest p and q");

  auto* wave = app.add_subcommand("wavefield", "psi samples and the pushforward consistency check");
  add_io(wave);
  add_T(wave);

  auto* geo = app.add_subcommand("geodesic", "geodesic polyline r,theta");
  geo->add_option("--out", cfg.output, "output file");
  geo->add_option("--r0", cfg.r0, "seed radius");
  geo->add_option("--theta0", cfg.theta0, "seed angle");
  geo->add_option("--c0", cfg.c0, "geodesic constant, at least 1/r0^2 (default 2/r0^2)");
  geo->add_option("--sign", cfg.sign, "branch, +1 or -1");
  geo->add_option("--points", cfg.points, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : layerlab::exit_invalid;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return layerlab::run(cfg, std::cout, std::cerr);
}
