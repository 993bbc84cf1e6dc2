#include "holegen/interp/oracle.hpp"

#include <cmath>
#include <limits>

namespace holegen::interp {

using namespace lang;

HoleOracle HoleOracle::filling(std::uint64_t seed) {
  HoleOracle o;
  o.mode_ = Mode::Filling;
  o.rng_.seed(seed);
  return o;
}

HoleOracle HoleOracle::replay(std::map<int, ExprPtr> decisions) {
  HoleOracle o;
  o.mode_ = Mode::Replay;
  o.decisions_ = std::move(decisions);
  return o;
}

HoleOracle HoleOracle::trapping() { return HoleOracle(); }

const Expr* HoleOracle::decision(int id) const {
  auto it = decisions_.find(id);
  return it == decisions_.end() ? nullptr : it->second.get();
}

const Expr& HoleOracle::decide(const Expr& hole) {
  auto it = decisions_.find(hole.holeId);
  if (it != decisions_.end()) return *it->second;
  static const HoleSite kEmpty;
  ExprPtr fill = fillHole(*hole.hole, hole.site ? *hole.site : kEmpty, rng_);
  order_.push_back(hole.holeId);
  return *decisions_.emplace(hole.holeId, std::move(fill)).first->second;
}

Value randomValue(const Type& t, Rng& rng) {
  switch (t.kind) {
    case TypeKind::Int:
      return Value::ofInt(static_cast<std::int32_t>(static_cast<std::uint32_t>(rng())));
    case TypeKind::Bool:
      return Value::ofBool(rng() & 1);
    case TypeKind::Char: {
      if (rng() & 1) return Value::ofChar(static_cast<std::uint16_t>(0x20 + rng() % 95));
      return Value::ofChar(static_cast<std::uint16_t>(rng() & 0xffff));
    }
    case TypeKind::Double: {
      std::uint64_t bucket = rng() % 4;
      if (bucket < 2) {
        std::uniform_real_distribution<double> dist(-2147483648.0, 2147483648.0);
        return Value::ofDouble(dist(rng));
      }
      if (bucket == 2) {
        static const double kSpecial[] = {0.0,
                                          -0.0,
                                          std::numeric_limits<double>::quiet_NaN(),
                                          std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity(),
                                          std::numeric_limits<double>::denorm_min(),
                                          -std::numeric_limits<double>::denorm_min()};
        return Value::ofDouble(kSpecial[rng() % std::size(kSpecial)]);
      }
      int exponent = static_cast<int>(rng() % 2046) - 1022;
      double mantissa = 1.0 + static_cast<double>(rng() >> 12) / 4503599627370496.0;
      double d = std::ldexp(mantissa, exponent);
      return Value::ofDouble((rng() & 1) ? -d : d);
    }
    default:
      return Value::null();
  }
}

namespace {

ExprPtr annotated(ExprPtr e, const Type& t) {
  e->type = t;
  return e;
}

std::vector<const ScopeVar*> idCandidates(const HoleSpec& spec, const HoleSite& site) {
  std::vector<const ScopeVar*> out;
  for (const auto& v : site.scope)
    if (v.type == spec.type && v.name != site.assignTarget) out.push_back(&v);
  return out;
}

}  // namespace

ExprPtr fillHole(const HoleSpec& spec, const HoleSite& site, Rng& rng) {
  switch (spec.kind) {
    case HoleKind::Id: {
      auto cands = idCandidates(spec, site);
      if (cands.empty()) return spec.source->clone();
      const ScopeVar& v = *cands[rng() % cands.size()];
      auto e = makeIdent(v.name);
      e->binding = v.binding;
      return annotated(std::move(e), v.type);
    }
    case HoleKind::Val:
      return annotated(makeLiteral(randomValue(spec.type, rng)), spec.type);
    case HoleKind::Fixed:
      return spec.source->clone();
    case HoleKind::Arith:
    case HoleKind::Shift:
    case HoleKind::Relation:
    case HoleKind::Logic: {
      BinOp op = spec.ops[rng() % spec.ops.size()];
      auto l = fillHole(spec.operands[0], site, rng);
      auto r = fillHole(spec.operands[1], site, rng);
      return annotated(makeBinary(op, std::move(l), std::move(r)), spec.type);
    }
    case HoleKind::ArrAcc: {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::ArrayAccess;
      e->kids.push_back(fillHole(spec.operands[0], site, rng));
      e->kids.push_back(fillHole(spec.operands[1], site, rng));
      return annotated(std::move(e), spec.type);
    }
    case HoleKind::Cast: {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Cast;
      e->castType = spec.type;
      e->kids.push_back(fillHole(spec.operands[0], site, rng));
      return annotated(std::move(e), spec.type);
    }
  }
  return spec.source->clone();
}

bool inSpace(const Expr& e, const HoleSpec& spec, const HoleSite& site) {
  if (spec.source && structurallyEqual(e, *spec.source)) return true;
  switch (spec.kind) {
    case HoleKind::Id: {
      if (e.kind != ExprKind::Ident) return false;
      for (const auto* v : idCandidates(spec, site))
        if (v->name == e.name) return true;
      return false;
    }
    case HoleKind::Val:
      return e.kind == ExprKind::Literal && e.type == spec.type;
    case HoleKind::Fixed:
      return false;
    case HoleKind::Arith:
    case HoleKind::Shift:
    case HoleKind::Relation:
    case HoleKind::Logic: {
      if (e.kind != ExprKind::Binary) return false;
      bool opOk = false;
      for (BinOp op : spec.ops) opOk = opOk || op == e.binOp;
      return opOk && inSpace(*e.kids[0], spec.operands[0], site) && inSpace(*e.kids[1], spec.operands[1], site);
    }
    case HoleKind::ArrAcc:
      return e.kind == ExprKind::ArrayAccess && inSpace(*e.kids[0], spec.operands[0], site) &&
             inSpace(*e.kids[1], spec.operands[1], site);
    case HoleKind::Cast:
      return e.kind == ExprKind::Cast && e.castType == spec.type && inSpace(*e.kids[0], spec.operands[0], site);
  }
  return false;
}

}  // namespace holegen::interp
