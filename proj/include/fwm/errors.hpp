#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Group velocity is undefined where the two branches touch (epsilon == 0).
struct DegenerateDispersion : Error {
  using Error::Error;
};

// Scaled cubic variables need alpha != 0.
struct AlphaZero : Error {
  using Error::Error;
};

struct PlanMismatch : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct OverlappingWindows : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct NaNEncountered : Error {
  NaNEncountered(std::size_t step_index, double time)
      : Error("non-finite field at step " + std::to_string(step_index) + " (t = " +
              std::to_string(time) + "); reduce dt or refine the grid"),
        step(step_index),
        t(time) {}
  std::size_t step;
  double t;
};

}  // namespace fwm
