#pragma once

// Ockham prediction over explicitly well-ordered path families.
//
// A family is a list of blocks: finite blocks of paths and omega-blocks
// (sequences indexed by m = 1, 2, ...). Members are compared with the target
// path through their agreement time ("coverage"). Predictions pick the least
// member whose coverage clears a threshold:
//   closed  omega^t   coverage >= (t, closed)
//   open    omega^t-  coverage >= (t, open)
//   right   omega^t+  coverage >  (t, closed)

#include <gtp/errors.hpp>
#include <gtp/paths.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace gtp {

struct OrdinalIndex {
  std::size_t segment = 0;
  long offset = 0;  // position in a finite block (from 0) or m >= 1 in an omega-block
  auto operator<=>(const OrdinalIndex&) const = default;
};

inline std::string to_string(const OrdinalIndex& i) {
  return "(" + std::to_string(i.segment) + ", " + std::to_string(i.offset) + ")";
}

/// Coverage profile of an omega-block against one target.
///
/// Members 1..run_end (all members if run_end < 0) have closed coverage at
/// run_time(m), strictly increasing in m; the following members have the
/// coverages listed in `middle`; every later member has coverage `tail`.
struct OmegaProfile {
  long run_end = 0;
  std::function<Rat(long)> run_time;
  std::function<long(const Rat&, bool)> run_first;  // least m >= 1 with run_time(m) >= x (> x if strict)
  Rat limit;                                         // sup of run_time for an infinite run
  std::vector<Agreement> middle;
  Agreement tail;

  bool infinite_run() const { return run_end < 0; }

  Agreement coverage(long m) const {
    if (infinite_run() || m <= run_end) return {run_time(m), true};
    long k = m - run_end - 1;
    if (k < static_cast<long>(middle.size())) return middle[static_cast<std::size_t>(k)];
    return tail;
  }
};

struct FiniteBlock {
  std::vector<Path> paths;
  std::vector<std::string> labels;
};

struct OmegaBlock {
  std::string kind;
  Rat param;
  std::function<Path(long)> member;
  std::function<std::string(long)> label;
  // Closed-form coverage profile; empty means only a bounded scan is possible.
  std::function<std::optional<OmegaProfile>(const Path&)> profile;
};

inline constexpr long omega_scan_limit = 10000;

class WellOrderedFamily {
 public:
  using Block = std::variant<FiniteBlock, OmegaBlock>;

  WellOrderedFamily& add_finite(std::vector<Path> paths, std::vector<std::string> labels = {}) {
    if (paths.empty()) throw std::invalid_argument("finite block must not be empty");
    if (labels.empty())
      for (std::size_t i = 0; i < paths.size(); ++i) labels.push_back("omega_" + std::to_string(member_count_hint_ + i + 1));
    if (labels.size() != paths.size()) throw std::invalid_argument("one label per path");
    member_count_hint_ += paths.size();
    blocks_.push_back(FiniteBlock{std::move(paths), std::move(labels)});
    return *this;
  }

  WellOrderedFamily& add_omega(OmegaBlock block) {
    blocks_.push_back(std::move(block));
    return *this;
  }

  const std::vector<Block>& blocks() const { return blocks_; }

  Path member(const OrdinalIndex& i) const {
    check_index(i);
    if (auto* f = std::get_if<FiniteBlock>(&blocks_[i.segment])) return f->paths[static_cast<std::size_t>(i.offset)];
    return std::get<OmegaBlock>(blocks_[i.segment]).member(i.offset);
  }

  std::string label(const OrdinalIndex& i) const {
    check_index(i);
    if (auto* f = std::get_if<FiniteBlock>(&blocks_[i.segment])) return f->labels[static_cast<std::size_t>(i.offset)];
    const auto& o = std::get<OmegaBlock>(blocks_[i.segment]);
    return o.label ? o.label(i.offset) : o.kind + "[" + std::to_string(i.offset) + "]";
  }

  /// Order type as a string, e.g. "omega + 2".
  std::string order_type() const {
    std::string out;
    std::size_t finite = 0;
    for (const auto& b : blocks_) {
      if (auto* f = std::get_if<FiniteBlock>(&b)) {
        finite += f->paths.size();
      } else {
        out = out.empty() ? "omega" : out + " + omega";
        finite = 0;
      }
    }
    if (out.empty()) return std::to_string(finite);
    return finite ? out + " + " + std::to_string(finite) : out;
  }

  OrdinalIndex first_index() const { return first_in(0); }

 private:
  std::vector<Block> blocks_;
  std::size_t member_count_hint_ = 0;

  void check_index(const OrdinalIndex& i) const {
    if (i.segment >= blocks_.size()) throw std::out_of_range("no such family segment");
    if (auto* f = std::get_if<FiniteBlock>(&blocks_[i.segment])) {
      if (i.offset < 0 || i.offset >= static_cast<long>(f->paths.size())) throw std::out_of_range("no such member");
    } else if (i.offset < 1) {
      throw std::out_of_range("omega-block members are indexed from 1");
    }
  }

  OrdinalIndex first_in(std::size_t seg) const {
    if (seg >= blocks_.size()) throw std::out_of_range("empty family");
    return {seg, std::holds_alternative<FiniteBlock>(blocks_[seg]) ? 0L : 1L};
  }
};

enum class PredictMode { closed, open, right };

inline const char* to_string(PredictMode m) {
  switch (m) {
    case PredictMode::closed: return "closed";
    case PredictMode::open: return "open";
    case PredictMode::right: return "right";
  }
  return "?";
}

/// Threshold on coverage: coverage >= bound, or coverage > bound when strict.
struct Threshold {
  Agreement bound;
  bool strict = false;

  static Threshold of(const Rat& t, PredictMode mode) {
    switch (mode) {
      case PredictMode::closed: return {{t, true}, false};
      case PredictMode::open: return {{t, false}, false};
      case PredictMode::right: return {{t, true}, true};
    }
    return {};
  }

  bool accepts(const Agreement& c) const { return strict ? c > bound : c >= bound; }
};

struct Prediction {
  Path path;
  OrdinalIndex index;
  std::string label;
};

namespace detail {

/// First run member whose closed coverage time is >= x (> x when strict), if any.
inline std::optional<long> run_hit(const OmegaProfile& p, const Rat& x, bool strict) {
  if (p.infinite_run()) {
    if (!(x < p.limit)) return std::nullopt;
  } else {
    if (p.run_end < 1) return std::nullopt;
    Rat last = p.run_time(p.run_end);
    if (strict ? !(last > x) : !(last >= x)) return std::nullopt;
  }
  return std::max(1L, p.run_first(x, strict));
}

// (x, closed) >= (t, c)  <=>  x >= t;   (x, closed) > (t, closed)  <=>  x > t.
inline std::optional<long> run_hit(const OmegaProfile& p, const Threshold& th) {
  return run_hit(p, th.bound.time, th.strict);
}

}  // namespace detail

/// Least member of `family` whose coverage of `omega` clears the threshold
/// for time t in the given mode. Searches blocks directly.
inline Prediction predict(const WellOrderedFamily& family, const Path& omega, const Rat& t, PredictMode mode) {
  if (t < 0 || t > 1) throw std::out_of_range("prediction time outside [0,1]");
  if (mode == PredictMode::right && t == 1) throw std::invalid_argument("right prediction needs t < 1");
  Threshold th = Threshold::of(t, mode);
  const auto& blocks = family.blocks();
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    if (auto* f = std::get_if<FiniteBlock>(&blocks[s])) {
      for (std::size_t i = 0; i < f->paths.size(); ++i)
        if (th.accepts(agreement_time(f->paths[i], omega)))
          return {f->paths[i], {s, static_cast<long>(i)}, f->labels[i]};
      continue;
    }
    const auto& o = std::get<OmegaBlock>(blocks[s]);
    std::optional<OmegaProfile> prof = o.profile ? o.profile(omega) : std::nullopt;
    std::optional<long> hit;
    if (prof) {
      hit = detail::run_hit(*prof, th);
      if (!hit && !prof->infinite_run()) {
        for (std::size_t k = 0; k < prof->middle.size() && !hit; ++k)
          if (th.accepts(prof->middle[k])) hit = prof->run_end + 1 + static_cast<long>(k);
        if (!hit && th.accepts(prof->tail)) hit = prof->run_end + 1 + static_cast<long>(prof->middle.size());
      }
    } else {
      for (long m = 1; m <= omega_scan_limit && !hit; ++m)
        if (th.accepts(agreement_time(o.member(m), omega))) hit = m;
      if (!hit)
        throw UnresolvedError("no match among the first " + std::to_string(omega_scan_limit) + " members of omega-block \"" +
                              o.kind + "\"");
    }
    if (hit) {
      OrdinalIndex idx{s, *hit};
      return {o.member(*hit), idx, family.label(idx)};
    }
  }
  throw std::invalid_argument("no family member agrees with the observed prefix at t=" + gtp::to_string(t) + " (" +
                              to_string(mode) + ")");
}

// ---------------------------------------------------------------------------
// Record analysis: members whose coverage exceeds every earlier coverage.

struct RecordItem {
  bool sequence = false;
  OrdinalIndex index;  // the member, or the first member of a run
  Agreement coverage;  // single records
  long last = 0;       // runs: last offset (inclusive), < 0 for an infinite run
  std::shared_ptr<const OmegaProfile> profile;

  bool infinite() const { return sequence && last < 0; }
  Rat run_time(long m) const { return profile->run_time(m); }
};

/// A well-ordered set of times: finitely many points plus finitely many
/// increasing sequences (each possibly infinite, with its limit).
class TimeSet {
 public:
  struct Sequence {
    std::function<Rat(long)> at;
    std::function<long(const Rat&, bool)> first_at_or_after;
    long first = 1;
    long last = -1;  // inclusive, < 0 for infinite
    Rat limit;
  };

  void insert(const Rat& t) { points_.insert(t); }
  void insert(Sequence s) { seqs_.push_back(std::move(s)); }

  const std::set<Rat>& points() const { return points_; }
  const std::vector<Sequence>& sequences() const { return seqs_; }
  bool finite() const {
    return std::none_of(seqs_.begin(), seqs_.end(), [](const Sequence& s) { return s.last < 0; });
  }

  bool contains(const Rat& x) const {
    if (points_.count(x)) return true;
    for (const auto& s : seqs_)
      if (auto m = first_in(s, x, false); m && s.at(*m) == x) return true;
    return false;
  }

  /// Least element strictly above x.
  std::optional<Rat> successor(const Rat& x) const {
    std::optional<Rat> best;
    auto consider = [&](const Rat& v) {
      if (!best || v < *best) best = v;
    };
    if (auto it = points_.upper_bound(x); it != points_.end()) consider(*it);
    for (const auto& s : seqs_)
      if (auto m = first_in(s, x, true)) consider(s.at(*m));
    return best;
  }

  std::optional<Rat> min() const {
    if (contains(0)) return Rat(0);
    return successor(0);
  }

  /// Points plus the first `per_sequence` terms of every sequence, sorted.
  std::vector<Rat> sample(long per_sequence = 6) const {
    std::set<Rat> out(points_.begin(), points_.end());
    for (const auto& s : seqs_) {
      long end = s.last < 0 ? s.first + per_sequence - 1 : std::min(s.last, s.first + per_sequence - 1);
      for (long m = s.first; m <= end; ++m) out.insert(s.at(m));
    }
    return {out.begin(), out.end()};
  }

  std::string describe() const {
    std::string out = "{";
    bool first = true;
    auto sep = [&] {
      if (!first) out += ", ";
      first = false;
    };
    std::set<Rat> shown(points_.begin(), points_.end());
    std::vector<std::string> seq_text;
    for (const auto& s : seqs_) {
      std::string t;
      long end = s.last < 0 ? s.first + 2 : std::min(s.last, s.first + 2);
      for (long m = s.first; m <= end; ++m) t += gtp::to_string(s.at(m)) + ", ";
      if (s.last < 0) t += "... -> " + gtp::to_string(s.limit);
      else if (s.last > end) t += "..., " + gtp::to_string(s.at(s.last));
      else t.resize(t.size() - 2);
      seq_text.push_back(t);
    }
    for (const auto& p : shown) {
      sep();
      out += gtp::to_string(p);
    }
    for (const auto& t : seq_text) {
      sep();
      out += t;
    }
    return out + "}";
  }

 private:
  std::set<Rat> points_;
  std::vector<Sequence> seqs_;

  static std::optional<long> first_in(const Sequence& s, const Rat& x, bool strict) {
    if (s.last < 0) {
      if (!(x < s.limit)) return std::nullopt;
    } else {
      Rat last = s.at(s.last);
      if (strict ? !(last > x) : !(last >= x)) return std::nullopt;
    }
    return std::max(s.first, s.first_at_or_after(x, strict));
  }
};

struct SuccessClass {
  bool past = false, present = false, future = false;
  bool operator==(const SuccessClass&) const = default;
  bool all() const { return past && present && future; }
  std::string tag() const {
    std::string s;
    auto add = [&](const char* x) {
      if (!s.empty()) s += ",";
      s += x;
    };
    if (past) add("-");
    if (present) add("0");
    if (future) add("+");
    return "(" + s + ")";
  }
  static SuccessClass from_tag(const std::string& tag) {
    SuccessClass c;
    std::string body = tag;
    if (!body.empty() && body.front() == '(') body.erase(body.begin());
    if (!body.empty() && body.back() == ')') body.pop_back();
    std::size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
      std::size_t next = body.find(',', pos);
      std::string part = body.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (part == "-") c.past = true;
      else if (part == "0") c.present = true;
      else if (part == "+") c.future = true;
      else throw std::invalid_argument("bad success class tag \"" + tag + "\"");
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return c;
  }
};

/// Record structure of a family against one target, and everything derived from it.
class OckhamAnalysis {
 public:
  OckhamAnalysis(const WellOrderedFamily& family, Path omega) : family_(&family), omega_(std::move(omega)) {
    build();
  }

  const std::vector<RecordItem>& records() const { return records_; }
  const Path& target() const { return omega_; }

  /// Prediction via the records (same semantics as `predict`).
  Prediction predict(const Rat& t, PredictMode mode) const {
    auto [item, idx] = locate(t, mode);
    (void)item;
    return {family_->member(idx), idx, family_->label(idx)};
  }

  /// Times that are not future-successful.
  TimeSet W() const {
    TimeSet w;
    for (const auto& r : records_) {
      if (r.sequence) w.insert(run_set(r));
      else if (r.coverage.closed) w.insert(r.coverage.time);
    }
    return w;
  }

  /// Times that are not past-, present- and future-successful at once.
  TimeSet F() const {
    TimeSet f = W();
    f.insert(Rat(0));
    f.insert(Rat(1));
    for (const auto& r : records_) {
      if (r.sequence) {
        if (r.infinite()) f.insert(r.profile->limit);
      } else if (!r.coverage.closed) {
        f.insert(r.coverage.time);
      }
    }
    return f;
  }

  SuccessClass classify(const Rat& t) const {
    SuccessClass c;
    auto closed = locate(t, PredictMode::closed);
    auto open = locate(t, PredictMode::open);
    c.present = closed.second == open.second;
    if (t < 1) c.future = closed.second == locate(t, PredictMode::right).second;
    if (t > 0) {
      c.past = true;
      const RecordItem& r = records_[open.first];
      bool first_of_item = !r.sequence || open.second.offset == r.index.offset;
      if (first_of_item && open.first > 0) {
        const RecordItem& prev = records_[open.first - 1];
        if (prev.infinite() && prev.profile->limit == t) c.past = false;
      }
    }
    return c;
  }

 private:
  const WellOrderedFamily* family_;
  Path omega_;
  std::vector<RecordItem> records_;

  static TimeSet::Sequence run_set(const RecordItem& r) {
    auto prof = r.profile;
    return {[prof](long m) { return prof->run_time(m); },
            [prof](const Rat& x, bool strict) { return prof->run_first(x, strict); }, r.index.offset, r.last,
            prof->limit};
  }

  // Index of the record item and the member answering the threshold.
  std::pair<std::size_t, OrdinalIndex> locate(const Rat& t, PredictMode mode) const {
    if (t < 0 || t > 1) throw std::out_of_range("prediction time outside [0,1]");
    if (mode == PredictMode::right && t == 1) throw std::invalid_argument("right prediction needs t < 1");
    Threshold th = Threshold::of(t, mode);
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const RecordItem& r = records_[i];
      if (!r.sequence) {
        if (th.accepts(r.coverage)) return {i, r.index};
        continue;
      }
      if (auto m = detail::run_hit(*r.profile, th)) return {i, {r.index.segment, std::max(r.index.offset, *m)}};
    }
    throw std::invalid_argument("no family member agrees with the observed prefix at t=" + gtp::to_string(t) + " (" +
                                to_string(mode) + ")");
  }

  void build() {
    // Best coverage so far; `limit` set when the best is the unattained sup of an infinite run.
    std::optional<Agreement> best;
    std::optional<Rat> limit;
    const Agreement top{Rat(1), true};
    auto beats = [&](const Agreement& c) {
      if (limit) return c.time >= *limit;
      return !best || c > *best;
    };
    auto take = [&](const Agreement& c, const OrdinalIndex& idx) {
      records_.push_back({false, idx, c, 0, nullptr});
      best = c;
      limit.reset();
    };
    const auto& blocks = family_->blocks();
    for (std::size_t s = 0; s < blocks.size(); ++s) {
      if (best && *best == top) return;
      if (auto* f = std::get_if<FiniteBlock>(&blocks[s])) {
        for (std::size_t i = 0; i < f->paths.size(); ++i) {
          Agreement c = agreement_time(f->paths[i], omega_);
          if (beats(c)) take(c, {s, static_cast<long>(i)});
          if (*best == top) return;
        }
        continue;
      }
      const auto& o = std::get<OmegaBlock>(blocks[s]);
      std::optional<OmegaProfile> prof = o.profile ? o.profile(omega_) : std::nullopt;
      if (!prof) throw UnresolvedError("omega-block \"" + o.kind + "\" has no coverage profile for this target");
      auto shared = std::make_shared<const OmegaProfile>(std::move(*prof));
      // Run part.
      std::optional<long> m0 = limit  ? detail::run_hit(*shared, *limit, false)
                               : best ? detail::run_hit(*shared, best->time, best->closed)
                                      : detail::run_hit(*shared, Rat(0), false);
      if (m0) {
        RecordItem r{true, {s, *m0}, {}, shared->infinite_run() ? -1 : shared->run_end, shared};
        records_.push_back(r);
        if (shared->infinite_run()) {
          best.reset();
          limit = shared->limit;
          continue;  // an infinite run never ends inside the block
        }
        best = Agreement{shared->run_time(shared->run_end), true};
        limit.reset();
      }
      if (shared->infinite_run()) continue;
      long m = shared->run_end + 1;
      for (const auto& c : shared->middle) {
        if (beats(c)) take(c, {s, m});
        if (*best == top) return;
        ++m;
      }
      if (beats(shared->tail)) take(shared->tail, {s, m});
    }
  }
};

inline std::pair<TimeSet, TimeSet> failure_sets(const WellOrderedFamily& family, const Path& omega) {
  OckhamAnalysis a(family, omega);
  return {a.W(), a.F()};
}

struct ClassifiedTime {
  Rat time;
  bool critical;  // an element of F (or a sequence limit); otherwise a gap midpoint
  SuccessClass cls;
};

/// Classes at every sampled element of F and at the midpoint of each gap
/// after a sampled element.
inline std::vector<ClassifiedTime> classify_success(const WellOrderedFamily& family, const Path& omega,
                                                    long per_sequence = 6) {
  OckhamAnalysis a(family, omega);
  TimeSet f = a.F();
  std::vector<ClassifiedTime> out;
  for (const auto& t : f.sample(per_sequence)) {
    out.push_back({t, true, a.classify(t)});
    if (auto next = f.successor(t)) {
      Rat mid = (t + *next) / 2;
      out.push_back({mid, false, a.classify(mid)});
    }
  }
  return out;
}

}  // namespace gtp
