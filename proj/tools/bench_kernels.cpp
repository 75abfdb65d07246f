// Compares the serial reference kernels with the OpenMP paths on the two
// hot loops: batch gradients of the decomposition losses and the theorem
// battery. Prints wall time and speedup per kernel.

#include <chrono>
#include <cstdio>
#include <vector>

#include "diaster/parallel.hpp"
#include "diaster/rd/cuts.hpp"
#include "diaster/rd/train_kernels.hpp"
#include "diaster/theory/battery.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

diaster::env::Trajectory random_trajectory(diaster::nn::Rng& rng, int n_states, int n_actions,
                                           int len) {
  diaster::env::Trajectory tau;
  tau.states.resize(len + 1);
  tau.actions.resize(len);
  for (int i = 0; i <= len; ++i) tau.states[i] = diaster::nn::uniform_int(rng, 0, n_states - 1);
  for (int i = 0; i < len; ++i) tau.actions[i] = diaster::nn::uniform_int(rng, 0, n_actions - 1);
  tau.episodic_return = diaster::nn::uniform(rng, -1.0, 1.0);
  return tau;
}

template <typename Fn>
double time_best_of(int reps, const Fn& fn) {
  double best = 1e100;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, seconds(t0, Clock::now()));
  }
  return best;
}

}  // namespace

int main() {
  using namespace diaster;
  if (const char* threads = std::getenv("DIASTER_THREADS")) set_threads(std::atoi(threads));
  std::printf("worker threads: %d\n\n", max_threads());

  nn::Rng rng = nn::make_rng(99);
  const int S = 50, A = 4, T = 30, B = 64;
  rd::SaEncoder enc(S, A);
  rd::SubTrajModel psi(enc, 64, rng);
  rd::StepRewardModel phi(enc, {64, 64}, rng);

  std::vector<env::Trajectory> storage;
  storage.reserve(B);
  for (int i = 0; i < B; ++i) storage.push_back(random_trajectory(rng, S, A, T));
  std::vector<const env::Trajectory*> batch;
  for (const auto& t : storage) batch.push_back(&t);
  std::vector<std::vector<int>> cuts(B);
  std::vector<int> steps(B);
  for (int i = 0; i < B; ++i) {
    cuts[i] = rd::sample_cut_points(T, 1, rng);
    steps[i] = nn::uniform_int(rng, 0, T - 1);
  }

  const double psi_serial =
      time_best_of(5, [&] { rd::psi_batch_grad_serial(psi, batch, cuts); });
  const double psi_omp = time_best_of(5, [&] { rd::psi_batch_grad(psi, batch, cuts, true); });
  std::printf("return-loss batch grad  (B=%d, T=%d, H=64): serial %8.2f ms | omp %8.2f ms | x%.2f\n",
              B, T, psi_serial * 1e3, psi_omp * 1e3, psi_serial / psi_omp);

  const double phi_serial =
      time_best_of(5, [&] { rd::phi_batch_grad_serial(phi, psi, batch, steps); });
  const double phi_omp =
      time_best_of(5, [&] { rd::phi_batch_grad(phi, psi, batch, steps, true); });
  std::printf("step-loss batch grad    (B=%d, T=%d):       serial %8.2f ms | omp %8.2f ms | x%.2f\n",
              B, T, phi_serial * 1e3, phi_omp * 1e3, phi_serial / phi_omp);

  theory::BatteryConfig bcfg;
  bcfg.instances = 12;
  bcfg.entry_budget = 50'000;
  bcfg.parallel = false;
  const double battery_serial = time_best_of(2, [&] { theory::run_theorem_battery(bcfg); });
  bcfg.parallel = true;
  const double battery_omp = time_best_of(2, [&] { theory::run_theorem_battery(bcfg); });
  std::printf("theorem battery         (12 instances):     serial %8.2f ms | omp %8.2f ms | x%.2f\n",
              battery_serial * 1e3, battery_omp * 1e3, battery_serial / battery_omp);
  return 0;
}
