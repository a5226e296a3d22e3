#include "qset/universe.hpp"

#include <algorithm>
#include <unordered_set>

namespace qset {

// ---------------------------------------------------------------------------
// Fragment construction

std::map<Element, std::size_t> Fragment::ranks() const {
  std::map<Element, std::size_t> out;
  for (const auto& e : elements_.entries()) out.emplace(e.element, e.element.rank());
  return out;
}

std::size_t Fragment::cutoffs() const {
  return static_cast<std::size_t>(
      std::count_if(ledger_.begin(), ledger_.end(), [](const LedgerEntry& e) { return !e.result; }));
}

namespace {

QSet snapshot_of(const std::map<Element, Count>& counts) {
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [e, n] : counts) entries.push_back(Entry{e, n});
  return QSetBuilder::from_sorted(std::move(entries));
}

}  // namespace

Fragment build_fragment(const QSet& seeds, std::size_t depth, const FragmentLimits& limits) {
  if (seeds.empty()) throw Error(Errc::empty_universe, "a universe fragment needs at least one seed");
  if (seeds.distinct() > limits.max_elements) {
    throw Error(Errc::cap_exceeded, "seeds alone exceed the element cap " + std::to_string(limits.max_elements));
  }

  Fragment f;
  f.depth_ = depth;
  std::map<Element, Count> counts;
  for (const auto& e : seeds.entries()) {
    counts.emplace(e.element, e.count);
    f.ledger_.push_back(LedgerEntry{"seed", {}, e.element, e.count, {}, 0});
  }

  for (std::size_t round = 1; round <= depth; ++round) {
    const QSet u = snapshot_of(counts);
    std::vector<Element> snapshot;
    for (const auto& e : u.entries()) snapshot.push_back(e.element);

    auto record = [&](std::string op, std::vector<Element> operands, Element result) {
      if (counts.contains(result)) return;
      if (counts.size() >= limits.max_elements) {
        f.ledger_.push_back(LedgerEntry{std::move(op), std::move(operands), std::nullopt, 0, "element cap", round});
        return;
      }
      counts.emplace(result, 1);
      f.ledger_.push_back(LedgerEntry{std::move(op), std::move(operands), std::move(result), 1, {}, round});
    };
    auto cutoff = [&](std::string op, std::vector<Element> operands, const Error& err) {
      f.ledger_.push_back(LedgerEntry{std::move(op), std::move(operands), std::nullopt, 0, err.what(), round});
    };

    for (const auto& x : snapshot) {
      if (x.is_set()) {
        try {
          record("power", {x}, Element(power(x.set(), limits.algebra)));
        } catch (const Error& err) {
          if (err.code() != Errc::cap_exceeded) throw;
          cutoff("power", {x}, err);
        }
      }
      record("singleton", {x}, Element(singleton_in(x, u)));
    }
    for (const auto& x : snapshot) {
      for (const auto& y : snapshot) {
        record("pair", {x, y}, Element(pair_in(x, y, u)));
        record("opair", {x, y}, Element(opair_in(x, y, u)));
        if (x.is_set() && y.is_set()) {
          try {
            record("product", {x, y}, Element(product(x.set(), y.set(), limits.algebra)));
          } catch (const Error& err) {
            if (err.code() != Errc::cap_exceeded) throw;
            cutoff("product", {x, y}, err);
          }
          record("union", {x, y}, Element(union_of(x.set(), y.set())));
        }
      }
    }
  }
  f.elements_ = snapshot_of(counts);
  return f;
}

Fragment build_fragment(std::span<const Element> seeds, std::size_t depth, const FragmentLimits& limits) {
  QSetBuilder b;
  for (const auto& e : seeds) b.add(e);
  return build_fragment(b.build(), depth, limits);
}

QSet replay_ledger(const std::vector<LedgerEntry>& ledger, const Limits& limits) {
  std::map<Element, Count> counts;
  auto mismatch = [](const std::string& what) { return Error(Errc::invalid_argument, "ledger replay: " + what); };
  for (const auto& entry : ledger) {
    if (!entry.result) continue;
    if (entry.op == "seed") {
      if (!counts.emplace(*entry.result, entry.count).second) throw mismatch("duplicate seed");
      continue;
    }
    const QSet u = snapshot_of(counts);
    for (const auto& operand : entry.operands) {
      if (!u.contains(operand)) throw mismatch(entry.op + " operand is not yet a member");
    }
    const auto& ops = entry.operands;
    auto set_operand = [&](std::size_t i) -> const QSet& {
      if (i >= ops.size() || !ops[i].is_set()) throw mismatch(entry.op + " needs qset operands");
      return ops[i].set();
    };
    auto arity = [&](std::size_t n) {
      if (ops.size() != n) throw mismatch(entry.op + " has the wrong number of operands");
    };
    Element recomputed = QSet();
    if (entry.op == "power") {
      arity(1);
      recomputed = power(set_operand(0), limits);
    } else if (entry.op == "singleton") {
      arity(1);
      recomputed = singleton_in(ops[0], u);
    } else if (entry.op == "pair") {
      arity(2);
      recomputed = pair_in(ops[0], ops[1], u);
    } else if (entry.op == "opair") {
      arity(2);
      recomputed = opair_in(ops[0], ops[1], u);
    } else if (entry.op == "product") {
      arity(2);
      recomputed = product(set_operand(0), set_operand(1), limits);
    } else if (entry.op == "union") {
      arity(2);
      recomputed = union_of(set_operand(0), set_operand(1));
    } else {
      throw mismatch("unknown operation " + entry.op);
    }
    if (!(recomputed == *entry.result)) throw mismatch(entry.op + " result differs on recomputation");
    if (!counts.emplace(recomputed, entry.count).second) throw mismatch(entry.op + " result was already present");
  }
  return snapshot_of(counts);
}

// ---------------------------------------------------------------------------
// Closure audit

std::size_t ClosureReport::total_defects() const {
  return cond1.size() + cond2.size() + cond3.size() + cond4.size() + theorem1.size();
}

std::size_t ClosureReport::unexplained_theorem1() const {
  return static_cast<std::size_t>(
      std::count_if(theorem1.begin(), theorem1.end(), [](const Defect& d) { return d.explained_by.empty(); }));
}

namespace {

bool pow2_fits(Count n) { return n < 64; }

}  // namespace

ClosureReport check_qed(const QSet& u, const AuditOptions& options) {
  if (u.empty()) throw Error(Errc::empty_universe, "cannot audit an empty universe");
  ClosureReport report;

  std::vector<Element> members;
  std::vector<Element> qsets;
  std::size_t classical_members = 0;
  std::unordered_set<Count> qcards;
  for (const auto& e : u.entries()) {
    members.push_back(e.element);
    if (e.element.classical()) ++classical_members;
    if (e.element.is_set()) {
      qsets.push_back(e.element);
      qcards.insert(e.element.set().qcard());
    }
  }

  // (1) power qsets. A member can only be P(x) if its qcard is 2^qcard(x).
  for (const auto& x : qsets) {
    ++report.checked1;
    Count n = x.set().qcard();
    bool candidate = pow2_fits(n) && qcards.contains(Count{1} << n);
    if (candidate) {
      Limits raised = options.algebra;
      raised.power_operand = std::max(raised.power_operand, n);
      QSet p = power(x.set(), raised);
      if (!u.contains(p)) report.cond1.push_back({"power", {x}, Element(p), {}, {}});
    } else if (n <= options.algebra.power_operand) {
      report.cond1.push_back({"power", {x}, Element(power(x.set(), options.algebra)), {}, {}});
    } else {
      report.cond1.push_back({"power", {x}, std::nullopt, "P(x) has qcard 2^" + std::to_string(n) + "; no member that large", {}});
    }
  }

  // (2) singletons.
  for (const auto& x : members) {
    ++report.checked2;
    QSet s = singleton_in(x, u);
    if (!u.contains(s)) report.cond2.push_back({"singleton", {x}, Element(s), {}, {}});
  }

  // (3) products.
  for (const auto& x : qsets) {
    for (const auto& y : qsets) {
      ++report.checked3;
      Count n = 0;
      bool overflow = __builtin_mul_overflow(x.set().qcard(), y.set().qcard(), &n);
      if (!overflow && qcards.contains(n)) {
        Limits raised = options.algebra;
        raised.product_result = std::max(raised.product_result, n);
        QSet p = product(x.set(), y.set(), raised);
        if (!u.contains(p)) report.cond3.push_back({"product", {x, y}, Element(p), {}, {}});
      } else if (!overflow && n <= options.algebra.product_result) {
        report.cond3.push_back({"product", {x, y}, Element(product(x.set(), y.set(), options.algebra)), {}, {}});
      } else {
        report.cond3.push_back({"product", {x, y}, std::nullopt, "x * y is larger than every member", {}});
      }
    }
  }

  // (4) unions of classical-indexed families. The union depends only on the
  // distinct members, and a family with s distinct members needs at least s
  // classical index elements.
  {
    std::size_t bound = std::min(options.family_bound, classical_members);
    auto audit = [&](std::vector<Element> family, const QSet& joined) {
      ++report.checked4;
      if (!u.contains(joined)) report.cond4.push_back({"union", std::move(family), Element(joined), {}, {}});
    };
    audit({}, QSet());
    const std::size_t m = qsets.size();
    for (std::size_t i = 0; bound >= 1 && i < m; ++i) {
      audit({qsets[i]}, qsets[i].set());
      for (std::size_t j = i + 1; bound >= 2 && j < m; ++j) {
        QSet ij = union_of(qsets[i].set(), qsets[j].set());
        audit({qsets[i], qsets[j]}, ij);
        for (std::size_t k = j + 1; bound >= 3 && k < m; ++k) {
          audit({qsets[i], qsets[j], qsets[k]}, union_of(ij, qsets[k].set()));
        }
      }
    }
    if (bound > 3) {
      // Larger families: generic subset walk over index combinations.
      std::vector<std::size_t> pick;
      for (std::size_t s = 4; s <= bound && s <= m; ++s) {
        pick.resize(s);
        for (std::size_t t = 0; t < s; ++t) pick[t] = t;
        while (true) {
          QSet acc;
          std::vector<Element> family;
          for (auto idx : pick) {
            acc = union_of(acc, qsets[idx].set());
            family.push_back(qsets[idx]);
          }
          audit(std::move(family), acc);
          std::size_t t = s;
          while (t > 0 && pick[t - 1] == m - s + t - 1) --t;
          if (t == 0) break;
          ++pick[t - 1];
          for (std::size_t r = t; r < s; ++r) pick[r] = pick[r - 1] + 1;
        }
      }
    }
  }

  // Theorem 1 consequences, attributed to primitive defects sharing a witness.
  std::map<Element, std::vector<std::string>> blame;
  auto index_defects = [&](const std::vector<Defect>& list, const std::string& tag) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (const auto& w : list[i].witnesses) blame[w].push_back(tag + "[" + std::to_string(i) + "]");
    }
  };
  index_defects(report.cond1, "cond1");
  index_defects(report.cond2, "cond2");
  index_defects(report.cond3, "cond3");

  auto theorem1 = [&](const char* construct, const Element& x, const Element& y, const QSet& result) {
    ++report.checked_theorem1;
    if (u.contains(result)) return;
    Defect d{construct, {x, y}, Element(result), {}, {}};
    for (const auto* w : {&x, &y}) {
      if (auto it = blame.find(*w); it != blame.end()) {
        d.explained_by.insert(d.explained_by.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(d.explained_by.begin(), d.explained_by.end());
    d.explained_by.erase(std::unique(d.explained_by.begin(), d.explained_by.end()), d.explained_by.end());
    report.theorem1.push_back(std::move(d));
  };
  for (const auto& x : members) {
    for (const auto& y : members) {
      if (x.is_set() && y.is_set()) theorem1("union", x, y, union_of(x.set(), y.set()));
      theorem1("pair", x, y, pair_in(x, y, u));
      theorem1("opair", x, y, opair_in(x, y, u));
    }
  }
  return report;
}

ClosureReport check_qed(const Fragment& u, const AuditOptions& options) { return check_qed(u.elements(), options); }

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::u_qset: return "UQset";
    case Verdict::u_proper_qclass: return "UProperQclass";
    case Verdict::u_qclass: return "UQclass";
    case Verdict::neither: return "Neither";
  }
  return "Neither";
}

Classification classify(const QSet& x, const QSet& u) {
  Classification c{Verdict::neither, u.contains(Element(x)), true};
  for (const auto& e : x.entries()) {
    if (e.count > u.count_of(e.element)) {
      c.subclass = false;
      break;
    }
  }
  if (c.member) {
    c.verdict = Verdict::u_qset;
  } else if (c.subclass) {
    c.verdict = Verdict::u_proper_qclass;
  }
  return c;
}

bool is_small_category(const CategoryPresentation& c, const QSet& u) {
  return classify(c.objects, u).verdict == Verdict::u_qset && classify(c.morphisms, u).verdict == Verdict::u_qset;
}

CategoryPresentation category_of_all(const QSet& u) {
  std::vector<QuasiFunction> ids;
  for (const auto& e : u.entries()) {
    if (e.element.is_set()) ids.push_back(identity(e.element.set()));
  }
  return CategoryPresentation::make(u, ids);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

// Entries in canonical text order: atoms by id, then qsets, then pairs by text.
std::vector<std::pair<std::string, const Entry*>> text_order(const QSet& x, const Vocabulary& vocab) {
  struct Row {
    int group;
    std::string text;
    const Entry* entry;
  };
  std::vector<Row> rows;
  for (const auto& e : x.entries()) {
    int group = e.element.is_atom() ? 0 : e.element.is_set() ? 1 : 2;
    rows.push_back(Row{group, render(e.element, vocab), &e});
  }
  // atoms keep their storage order (kind id, then atom id)
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.group != b.group) return a.group < b.group;
    return a.group != 0 && a.text < b.text;
  });
  std::vector<std::pair<std::string, const Entry*>> out;
  for (auto& row : rows) out.emplace_back(std::move(row.text), row.entry);
  return out;
}

nlohmann::ordered_json elements_json(const QSet& x, const Vocabulary& vocab) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [text, entry] : text_order(x, vocab)) out.push_back({text, entry->count});
  return out;
}

nlohmann::ordered_json rank_json(const QSet& x, const Vocabulary& vocab) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [text, entry] : text_order(x, vocab)) out[text] = entry->element.rank();
  return out;
}

nlohmann::ordered_json defects_json(const std::vector<Defect>& list, const Vocabulary& vocab, bool attributed = false) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& d : list) {
    nlohmann::ordered_json item;
    item["construct"] = d.construct;
    auto witnesses = nlohmann::ordered_json::array();
    for (const auto& w : d.witnesses) witnesses.push_back(render(w, vocab));
    item["witnesses"] = std::move(witnesses);
    item["missing"] = d.missing ? nlohmann::ordered_json(render(*d.missing, vocab)) : nlohmann::ordered_json(nullptr);
    if (!d.note.empty()) item["note"] = d.note;
    if (attributed) item["explained_by"] = d.explained_by;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const Fragment& fragment, const Vocabulary& vocab) {
  nlohmann::ordered_json out;
  out["elements"] = elements_json(fragment.elements(), vocab);
  out["rank"] = rank_json(fragment.elements(), vocab);
  out["depth"] = fragment.depth();
  auto ledger = nlohmann::ordered_json::array();
  for (const auto& entry : fragment.ledger()) {
    nlohmann::ordered_json item;
    item["op"] = entry.op;
    auto operands = nlohmann::ordered_json::array();
    for (const auto& o : entry.operands) operands.push_back(render(o, vocab));
    item["operands"] = std::move(operands);
    item["result"] = entry.result ? nlohmann::ordered_json(render(*entry.result, vocab)) : nlohmann::ordered_json(nullptr);
    if (entry.op == "seed") item["count"] = entry.count;
    if (!entry.result) item["cutoff"] = entry.cutoff;
    item["round"] = entry.round;
    ledger.push_back(std::move(item));
  }
  out["ledger"] = std::move(ledger);
  return out;
}

nlohmann::ordered_json to_json(const ClosureReport& report, const Vocabulary& vocab) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json defects;
  defects["cond1"] = defects_json(report.cond1, vocab);
  defects["cond2"] = defects_json(report.cond2, vocab);
  defects["cond3"] = defects_json(report.cond3, vocab);
  defects["cond4"] = defects_json(report.cond4, vocab);
  defects["theorem1"] = defects_json(report.theorem1, vocab, true);
  out["defects"] = std::move(defects);
  nlohmann::ordered_json totals;
  totals["cond1"] = {{"checked", report.checked1}, {"defects", report.cond1.size()}};
  totals["cond2"] = {{"checked", report.checked2}, {"defects", report.cond2.size()}};
  totals["cond3"] = {{"checked", report.checked3}, {"defects", report.cond3.size()}};
  totals["cond4"] = {{"checked", report.checked4}, {"defects", report.cond4.size()}};
  totals["theorem1"] = {{"checked", report.checked_theorem1},
                        {"defects", report.theorem1.size()},
                        {"unexplained", report.unexplained_theorem1()}};
  out["totals"] = std::move(totals);
  return out;
}

}  // namespace qset
