// Command-line front end for the tactile DBM experiments.
//
//   tactile train        --receptive-field circular --trials 10 --out runs
//   tactile scenarios    --receptive-field circular --out runs --check
//   tactile homeostasis  --receptive-field circular --out runs [--eta 0]
//   tactile pipeline     (train, scenarios and homeostasis in one go)
//   tactile simulate-skin --rounds 30 --out runs
//   tactile decode --checkpoint runs/checkpoints/circular/trial_0.ckpt --states states.txt --out runs
//
// Exit codes: 0 ok, 1 invalid config, 2 I/O failure, 3 a --check threshold failed.

#include "tactile/acceptance.hpp"
#include "tactile/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

enum Exit { kOk = 0, kBadConfig = 1, kIo = 2, kCheckFailed = 3 };

struct CommonFlags {
  std::string config;
  std::string receptive_field;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool check = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Flat KEY=VALUE config file");
  cmd->add_option("--receptive-field", f.receptive_field, "linear or circular")
      ->check(CLI::IsMember({"linear", "circular"}));
  cmd->add_option("--trials", f.trials, "Number of independent trials");
  cmd->add_option("--seed", f.seed, "Base seed; trial t uses seed + t");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--check", f.check, "Exit with 3 if an acceptance threshold fails");
}

// Defaults, then the config file, then explicit flags.
tactile::ExperimentConfig resolve(const CLI::App* cmd, const CommonFlags& f) {
  tactile::ExperimentConfig c;
  if (!f.config.empty()) c = tactile::load_config(f.config, c);
  if (cmd->count("--receptive-field")) c.receptive_field = tactile::parse_receptive_field(f.receptive_field);
  if (cmd->count("--trials")) c.trials = f.trials;
  if (cmd->count("--seed")) c.base_seed = f.seed;
  if (cmd->count("--out")) c.output_dir = f.out;
  c.validate();
  return c;
}

int report(const std::vector<tactile::CheckLine>& lines, bool check) {
  for (const auto& l : lines) std::cout << tactile::format_check(l) << '\n';
  return check && !tactile::all_passed(lines) ? kCheckFailed : kOk;
}

int run_train(const tactile::ExperimentConfig& c, bool check) {
  const tactile::TrainReport r = tactile::cmd_train(c);
  std::printf("trained %zu %s trials: pretrain1 %.3f  pretrain2 %.3f  dbm %.3f\n", r.trials.size(),
              tactile::to_string(c.receptive_field).c_str(), r.mean_final_q(tactile::Phase::pretrain1),
              r.mean_final_q(tactile::Phase::pretrain2), r.mean_final_q(tactile::Phase::dbm));
  return report(tactile::check_training(r, c.receptive_field), check);
}

int run_scenarios(const tactile::ExperimentConfig& c, bool check) {
  const tactile::ScenarioScores m = tactile::cmd_scenarios(c).mean();
  std::printf("%s means: Q_pattern %.3f  Q_corrupted %.3f  Q_blank %.3f\n",
              tactile::to_string(c.receptive_field).c_str(), m.q_pattern, m.q_corrupted, m.q_blank);
  return report(tactile::check_scenarios(m, c.receptive_field), check);
}

int run_homeostasis(const tactile::ExperimentConfig& c, bool check) {
  const tactile::HomeostasisReport r = tactile::cmd_homeostasis(c);
  const tactile::ScenarioResult m = r.mean();
  std::printf("%s means: Q_blank %.3f  Q_hallucination %.3f  dQ_loss %.3f  dQ_gain %.3f\n",
              tactile::to_string(c.receptive_field).c_str(), m.q_blank, m.q_hallucination, m.dq_loss, m.dq_gain);
  if (r.rho) {
    std::printf("loss/gain rho %.3f over %zu trials\n", *r.rho, r.summary.size());
  } else {
    std::printf("loss/gain rho undefined over %zu trials\n", r.summary.size());
  }
  return report(tactile::check_homeostasis(r, c.homeo.eta, c.homeo.steps), check);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile hallucinations in a deep Boltzmann machine"};
  app.require_subcommand(1);

  CommonFlags train_f, scen_f, homeo_f, pipe_f, skin_f, dec_f;
  auto* train = app.add_subcommand("train", "Pretrain and fine-tune one DBM per trial");
  add_common(train, train_f);
  auto* scen = app.add_subcommand("scenarios", "Score pattern, corrupted and blank input on trained checkpoints");
  add_common(scen, scen_f);
  auto* homeo = app.add_subcommand("homeostasis", "Run homeostasis under blank input on trained checkpoints");
  add_common(homeo, homeo_f);
  double eta = 0.0;
  homeo->add_option("--eta", eta, "Override the adaptation rate (0 for the ablation)");
  auto* pipe = app.add_subcommand("pipeline", "train, scenarios and homeostasis in sequence");
  add_common(pipe, pipe_f);
  auto* skin = app.add_subcommand("simulate-skin", "Acquire a dataset from a simulated force stream");
  add_common(skin, skin_f);
  std::size_t rounds = 0;
  bool noise_free = false;
  skin->add_option("--rounds", rounds, "Acquisition rounds");
  skin->add_flag("--noise-free", noise_free, "Exact force readings instead of noisy ones");
  auto* dec = app.add_subcommand("decode", "Decode deep-layer states to patterns and LED frames");
  add_common(dec, dec_f);
  std::string checkpoint, states, mode;
  dec->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  dec->add_option("--states", states, "Deep states in pattern-file format")->required();
  dec->add_option("--mode", mode, "stochastic or deterministic")
      ->check(CLI::IsMember({"stochastic", "deterministic"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*train) return run_train(resolve(train, train_f), train_f.check);
    if (*scen) return run_scenarios(resolve(scen, scen_f), scen_f.check);
    if (*homeo) {
      tactile::ExperimentConfig c = resolve(homeo, homeo_f);
      if (homeo->count("--eta")) {
        c.homeo.eta = eta;
        c.validate();
      }
      return run_homeostasis(c, homeo_f.check);
    }
    if (*pipe) {
      const tactile::ExperimentConfig c = resolve(pipe, pipe_f);
      const int a = run_train(c, pipe_f.check);
      const int b = run_scenarios(c, pipe_f.check);
      const int h = run_homeostasis(c, pipe_f.check);
      return (a || b || h) ? kCheckFailed : kOk;
    }
    if (*skin) {
      tactile::ExperimentConfig c = resolve(skin, skin_f);
      if (skin->count("--rounds")) c.skin_rounds = rounds;
      if (noise_free) c.skin_noise = false;
      c.validate();
      const tactile::SkinReport r = tactile::cmd_simulate_skin(c);
      std::printf("accepted %zu of %zu rounds (%.3f), %zu distinct patterns -> %s\n", r.accepted, r.rounds,
                  r.acceptance_rate(), r.patterns.size(), r.dataset_file.string().c_str());
      return report(tactile::check_skin(r, tactile::experiment_dataset(c)), skin_f.check);
    }
    if (*dec) {
      tactile::ExperimentConfig c = resolve(dec, dec_f);
      if (dec->count("--mode")) c.decode_mode = tactile::parse_decode_mode(mode);
      const auto patterns = tactile::cmd_decode(c, checkpoint, states);
      std::printf("decoded %zu states -> %s\n", patterns.size(), (c.output_dir / "decoded.txt").string().c_str());
      return kOk;
    }
  } catch (const tactile::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const tactile::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const tactile::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kBadConfig;
  } catch (const tactile::InvalidInput& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  return kOk;
}
