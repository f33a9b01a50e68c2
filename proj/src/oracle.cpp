#include "tangle_forge/oracle.hpp"

#include <cstdlib>
#include <string>

namespace tangle_forge {

OracleBudget OracleBudget::from_env() {
  OracleBudget budget;
  if (const char* env = std::getenv("TANGLE_FORGE_BUDGET")) {
    try {
      budget.max_separations = std::stoul(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("TANGLE_FORGE_BUDGET is not a number: ") + env);
    }
  }
  return budget;
}

namespace {

class Enumerator {
 public:
  Enumerator(const SeparationSystem& system, const ForbiddenFamily* family,
             const std::function<void(const PartialOrientation&)>& visit, const OracleBudget& budget)
      : system_(system), family_(family), visit_(visit), budget_(budget), current_(system.empty_set()) {}

  void run() {
    if (system_.size() > budget_.max_separations) {
      throw Error(ErrorCode::BudgetExceeded, std::to_string(system_.size()) + " separations exceed the oracle budget of " +
                                                 std::to_string(budget_.max_separations));
    }
    if (family_ && family_->has_forbidden_subset(current_)) return;
    descend(0);
  }

 private:
  bool compatible(OrientedSep a) const {
    bool ok = true;
    current_.for_each([&](OrientedSep b) {
      if (ok && system_.leq(a, b.inverse())) ok = false;
    });
    return ok;
  }

  void descend(std::uint32_t s) {
    if (++visits_ > budget_.max_visits) throw Error(ErrorCode::BudgetExceeded, "oracle visit budget exhausted");
    if (s == system_.size()) {
      visit_(current_);
      return;
    }
    for (auto a : {OrientedSep::forward(SepId{s}), OrientedSep::backward(SepId{s})}) {
      if (!compatible(a)) continue;
      current_.insert(a);
      if (!family_ || !family_->has_forbidden_subset_with(current_, a)) descend(s + 1);
      current_.erase(a);
    }
  }

  const SeparationSystem& system_;
  const ForbiddenFamily* family_;
  const std::function<void(const PartialOrientation&)>& visit_;
  OracleBudget budget_;
  PartialOrientation current_;
  std::size_t visits_ = 0;
};

}  // namespace

void for_each_consistent_orientation(const SeparationSystem& system, const ForbiddenFamily* family,
                                     const std::function<void(const PartialOrientation&)>& visit,
                                     const OracleBudget& budget) {
  if (family && &family->system() != &system) {
    throw Error(ErrorCode::GroundMismatch, "family is bound to a different separation system");
  }
  Enumerator(system, family, visit, budget).run();
}

std::vector<PartialOrientation> all_consistent_orientations(const SeparationSystem& system,
                                                            const OracleBudget& budget) {
  std::vector<PartialOrientation> out;
  for_each_consistent_orientation(system, nullptr, [&](const PartialOrientation& tau) { out.push_back(tau); }, budget);
  return out;
}

std::vector<PartialOrientation> all_tangles(const ForbiddenFamily& family, const OracleBudget& budget) {
  std::vector<PartialOrientation> out;
  for_each_consistent_orientation(family.system(), &family,
                                  [&](const PartialOrientation& tau) { out.push_back(tau); }, budget);
  return out;
}

bool eclipses(const SeparationSystem& system, OrientedSep r, OrientedSep s) {
  return system.less(r, s) && system.order(r) < system.order(s);
}

bool weakly_eclipses(const SeparationSystem& system, OrientedSep r, OrientedSep s) {
  return system.less(r, s) && system.order(r) <= system.order(s);
}

bool is_efficient_in(const SeparationSystem& system, const PartialOrientation& sigma, const PartialOrientation& tau) {
  bool ok = true;
  sigma.for_each([&](OrientedSep s) {
    tau.for_each([&](OrientedSep r) {
      if (ok && r != s && eclipses(system, r, s)) ok = false;
    });
  });
  return ok;
}

bool is_strongly_efficient_in(const SeparationSystem& system, const PartialOrientation& sigma,
                              const PartialOrientation& tau) {
  return sigma.is_subset_of(strongly_efficient_part(system, tau));
}

PartialOrientation strongly_efficient_part(const SeparationSystem& system, const PartialOrientation& tau) {
  PartialOrientation out(tau.universe_size());
  tau.for_each([&](OrientedSep s) {
    bool eclipsed = false;
    tau.for_each([&](OrientedSep r) {
      if (!eclipsed && r != s && weakly_eclipses(system, r, s)) eclipsed = true;
    });
    if (!eclipsed) out.insert(s);
  });
  return out;
}

}  // namespace tangle_forge
