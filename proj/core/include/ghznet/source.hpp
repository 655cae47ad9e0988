#pragma once

// State sources hand out fresh resource copies to protocol runs. A source is
// the single authority on state quality: protocols consume one copy per
// parity invocation and never model noise themselves.

#include <limits>
#include <memory>
#include <stdexcept>

#include "ghznet/qstate.hpp"
#include "ghznet/rng.hpp"

namespace ghznet {

class StateSource {
 public:
  virtual ~StateSource() = default;
  virtual int n_qubits() const = 0;
  virtual QuantumRegister draw(SplitMix64& rng) const = 0;
};

class IdealGhzSource final : public StateSource {
 public:
  explicit IdealGhzSource(int n, Sign sign = Sign::plus) : state_(ghz_state(n, sign)) {}
  int n_qubits() const override { return state_.n_qubits(); }
  QuantumRegister draw(SplitMix64&) const override { return state_; }

 private:
  QuantumRegister state_;
};

// Always emits the same prepared state (e.g. |0...0> for calibration tests).
class FixedStateSource final : public StateSource {
 public:
  explicit FixedStateSource(QuantumRegister state) : state_(std::move(state)) {}
  int n_qubits() const override { return state_.n_qubits(); }
  QuantumRegister draw(SplitMix64&) const override { return state_; }

 private:
  QuantumRegister state_;
};

struct SourceExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Decorator enforcing a copy budget; draws beyond it throw SourceExhausted.
class BudgetedSource final : public StateSource {
 public:
  BudgetedSource(std::shared_ptr<const StateSource> inner, long budget)
      : inner_(std::move(inner)), remaining_(budget) {}
  int n_qubits() const override { return inner_->n_qubits(); }
  QuantumRegister draw(SplitMix64& rng) const override {
    if (remaining_ <= 0) throw SourceExhausted("state source exhausted its copy budget");
    --remaining_;
    return inner_->draw(rng);
  }
  long remaining() const { return remaining_; }

 private:
  std::shared_ptr<const StateSource> inner_;
  mutable long remaining_;
};

}  // namespace ghznet
