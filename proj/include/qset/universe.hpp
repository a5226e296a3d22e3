#pragma once

// Bounded universe fragments, closure auditing and U-qset/U-qclass
// classification.
//
// No finite qset is closed under power qsets, so a fragment is an
// approximation: build_fragment() saturates for a bounded number of rounds
// and check_qed() reports exactly where closure fails.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qset/algebra.hpp"
#include "qset/kernel.hpp"
#include "qset/morphism.hpp"

namespace qset {

struct FragmentLimits {
  Limits algebra;
  std::size_t max_elements = 512;  // distinct element forms
};

struct LedgerEntry {
  std::string op;  // "seed", "power", "singleton", "pair", "opair", "product", "union"
  std::vector<Element> operands;
  std::optional<Element> result;  // empty for a cutoff
  Count count = 1;                // seeds only: multiplicity contributed
  std::string cutoff;             // reason when result is empty
  std::size_t round = 0;
};

class Fragment {
 public:
  const QSet& elements() const { return elements_; }
  const std::vector<LedgerEntry>& ledger() const { return ledger_; }
  std::size_t depth() const { return depth_; }
  std::map<Element, std::size_t> ranks() const;
  std::size_t cutoffs() const;

 private:
  QSet elements_;
  std::vector<LedgerEntry> ledger_;
  std::size_t depth_ = 0;
  friend Fragment build_fragment(const QSet&, std::size_t, const FragmentLimits&);
};

/// Starts from the seeds (with their counts) and runs `depth` closure rounds.
/// Each round applies power and singleton to every element and pair, ordered
/// pair, product and union to every ordered pair of elements of the round's
/// snapshot. Throws Errc::empty_universe for no seeds and Errc::cap_exceeded
/// when the seeds alone exceed max_elements.
Fragment build_fragment(const QSet& seeds, std::size_t depth, const FragmentLimits& limits = {});
Fragment build_fragment(std::span<const Element> seeds, std::size_t depth, const FragmentLimits& limits = {});

/// Re-executes a ledger, verifying each recorded result; returns the rebuilt
/// universe. Throws Errc::invalid_argument on any mismatch.
QSet replay_ledger(const std::vector<LedgerEntry>& ledger, const Limits& limits = {});

struct Defect {
  std::string construct;           // "power", "singleton", "product", "union", "pair", "opair"
  std::vector<Element> witnesses;  // members of U the construct was applied to
  std::optional<Element> missing;  // the absent result, when it was materialized
  std::string note;
  std::vector<std::string> explained_by;  // Theorem-1 entries only, e.g. "cond1[0]"
};

struct ClosureReport {
  std::vector<Defect> cond1;  // power
  std::vector<Defect> cond2;  // singleton
  std::vector<Defect> cond3;  // product
  std::vector<Defect> cond4;  // classical-indexed union
  std::vector<Defect> theorem1;
  Count checked1 = 0, checked2 = 0, checked3 = 0, checked4 = 0, checked_theorem1 = 0;

  std::size_t total_defects() const;
  /// Theorem-1 defects with no witness-sharing condition (1)-(3) defect.
  std::size_t unexplained_theorem1() const;
};

struct AuditOptions {
  Limits algebra;
  std::size_t family_bound = 3;  // max distinct members of an audited family
};

/// Audits the closure conditions on every member (pair of members, family of
/// members) of U and the derived x u y, [x,y]_U, <x,y>_U memberships.
/// Throws Errc::empty_universe for an empty U.
ClosureReport check_qed(const QSet& u, const AuditOptions& options = {});
ClosureReport check_qed(const Fragment& u, const AuditOptions& options = {});

enum class Verdict { u_qset, u_proper_qclass, u_qclass, neither };
std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict;
  bool member;    // x in U
  bool subclass;  // x included in U, count-wise per class
};

Classification classify(const QSet& x, const QSet& u);

/// Small iff both objects and morphisms are U-qsets.
bool is_small_category(const CategoryPresentation& c, const QSet& u);

/// The presentation whose objects are all of U and whose morphisms are the
/// identities of U's qset members.
CategoryPresentation category_of_all(const QSet& u);

nlohmann::ordered_json to_json(const Fragment& fragment, const Vocabulary& vocab);
nlohmann::ordered_json to_json(const ClosureReport& report, const Vocabulary& vocab);

}  // namespace qset
