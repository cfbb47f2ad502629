#include "syn/glossary.hpp"

#include <set>

#include "syn/checks.hpp"
#include "syn/flat.hpp"

namespace syn {

namespace {

std::string join(const std::vector<BindDiagnostic>& diags) {
  std::string s;
  for (const auto& d : diags) {
    if (!s.empty()) s += "\n";
    s += d.code;
    if (!d.reqId.empty()) s += " " + d.reqId;
    if (!d.phrase.empty()) s += " \"" + d.phrase + "\"";
    s += ": " + d.message;
  }
  return s;
}

class Resolver {
 public:
  Resolver(const Model& m, std::string phrase) : m_(m), flat_(flatten(m)), phrase_(std::move(phrase)) {}

  ExprPtr run(const Expr& e) {
    ExprPtr r = guard(resolve(e));
    if (!diags_.empty()) throw BindError(diags_);
    TypeTable types(m_);
    CheckReport report;
    ExprTyper typer(types, report, "glossary", [&](const Expr& x) { return observe(x, types); });
    ExprTyper::Scope scope;
    auto t = typer.type_of(*r, scope);
    for (const auto& f : report.findings) diags_.push_back({"TypeError", {}, phrase_, f.message});
    if (t && !t->is_bool()) diags_.push_back({"TypeError", {}, phrase_, "atom has type " + describe(*t) + ", not Bool"});
    if (!diags_.empty()) throw BindError(diags_);
    return r;
  }

 private:
  std::optional<Type> observe(const Expr& x, const TypeTable& types) {
    switch (x.kind) {
      case Expr::Kind::PortPresent:
      case Expr::Kind::StateIs:
        return Type::boolean();
      case Expr::Kind::PortValue:
        return types.resolve(m_.root.find_port(x.name)->type);
      case Expr::Kind::StateVar: {
        const auto* a = flat_.instances[flat_.find(x.name)].spec->automaton();
        for (const auto& v : a->vars)
          if (v.name == x.member) return types.resolve(v.type);
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }

  ExprPtr resolve(const Expr& e) {
    Expr out = e;
    switch (e.kind) {
      case Expr::Kind::Name:
        if (bound(e.name)) return out;
        if (m_.root.find_port(e.name)) {
          out.kind = Expr::Kind::PortValue;
          return out;
        }
        return out;  // constructor or unknown; the typer decides
      case Expr::Kind::PortPresent:
        if (!m_.root.find_port(e.name)) diags_.push_back({"UnknownName", {}, phrase_, "no root port " + e.name});
        return out;
      case Expr::Kind::StateIs:
      case Expr::Kind::StateVar:
        return state(e);
      case Expr::Kind::Match:
        out.args = {resolve(*e.args[0])};
        for (auto& arm : out.arms) {
          for (const auto& b : arm.binds) scope_.push_back(b);
          arm.body = resolve(*arm.body);
          scope_.resize(scope_.size() - arm.binds.size());
        }
        return out;
      default:
        for (auto& a : out.args) a = resolve(*a);
        for (auto& fi : out.inits) fi.value = resolve(*fi.value);
        return out;
    }
  }

  ExprPtr state(const Expr& e) {
    std::string path = e.name;
    int inst = flat_.find(path);
    const std::string root = m_.root.name;
    if (inst < 0 && path == root) inst = 0;
    if (inst < 0 && path.rfind(root + ".", 0) == 0) inst = flat_.find(path.substr(root.size() + 1));
    if (inst < 0) {
      diags_.push_back({"UnknownName", {}, phrase_, "no component " + path});
      return e;
    }
    const Instance& in = flat_.instances[inst];
    Expr out = e;
    out.name = in.rel;
    if (const auto* a = in.spec->automaton()) {
      for (const auto& s : a->states)
        if (s.name == e.member) {
          out.kind = Expr::Kind::StateIs;
          return out;
        }
      for (const auto& v : a->vars)
        if (v.name == e.member) {
          out.kind = Expr::Kind::StateVar;
          return out;
        }
    }
    diags_.push_back({"UnknownName", {}, phrase_, in.path + " has no control state or variable " + e.member});
    return e;
  }

  bool bound(const std::string& n) const {
    for (const auto& b : scope_)
      if (b == n) return true;
    return false;
  }

  static void ports_read(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::PortValue) out.insert(e.name);
    for (const auto& a : e.args) ports_read(*a, out);
    for (const auto& fi : e.inits) ports_read(*fi.value, out);
    for (const auto& arm : e.arms) ports_read(*arm.body, out);
  }

  static ExprPtr guard(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Binary && (e->binop == BinaryOp::And || e->binop == BinaryOp::Or)) {
      Expr out = *e;
      out.args = {guard(e->args[0]), guard(e->args[1])};
      return out;
    }
    if (e->kind == Expr::Kind::Unary && e->unop == UnaryOp::Not) {
      Expr out = *e;
      out.args = {guard(e->args[0])};
      return out;
    }
    std::set<std::string> ports;
    ports_read(*e, ports);
    ExprPtr acc;
    for (const auto& p : ports) {
      Expr pres;
      pres.kind = Expr::Kind::PortPresent;
      pres.name = p;
      pres.pos = e->pos;
      acc = acc ? ex::binary(BinaryOp::And, acc, pres) : ExprPtr(pres);
    }
    return acc ? ex::binary(BinaryOp::And, acc, e) : e;
  }

  const Model& m_;
  FlatModel flat_;
  std::string phrase_;
  std::vector<std::string> scope_;
  std::vector<BindDiagnostic> diags_;
};

}  // namespace

BindError::BindError(std::vector<BindDiagnostic> diags) : std::runtime_error(join(diags)), diags_(std::move(diags)) {}

ExprPtr resolve_atom(const Model& m, const ExprPtr& e, const std::string& phrase) {
  return Resolver(m, phrase).run(*e);
}

BoundRequirements bind_glossary(const Model& m, const std::vector<GlossaryEntry>& glossary,
                                const std::vector<Requirement>& reqs) {
  BoundRequirements out;
  std::vector<BindDiagnostic> diags;
  std::map<std::string, const GlossaryEntry*> entries;
  for (const auto& g : glossary)
    if (!entries.emplace(g.phrase, &g).second)
      diags.push_back({"DuplicateDefinition", {}, g.phrase, "phrase defined twice in the glossary"});
  std::map<std::string, int> atom_of;
  auto bind = [&](const Requirement& r, const std::vector<std::string>& phrases, std::vector<int>& into) {
    for (const auto& p : phrases) {
      auto known = atom_of.find(p);
      if (known != atom_of.end()) {
        into.push_back(known->second);
        continue;
      }
      auto it = entries.find(p);
      if (it == entries.end()) {
        diags.push_back({"UnknownPhrase", r.id, p, "phrase has no glossary entry"});
        continue;
      }
      try {
        ExprPtr e = resolve_atom(m, it->second->expr, p);
        int idx = static_cast<int>(out.atoms.size());
        out.atoms.push_back({p, e});
        atom_of.emplace(p, idx);
        into.push_back(idx);
      } catch (const BindError& err) {
        for (auto d : err.diagnostics()) {
          d.reqId = r.id;
          diags.push_back(std::move(d));
        }
        atom_of.emplace(p, -1);
      }
    }
  };
  for (const auto& r : reqs) {
    BoundRequirement b;
    b.req = r;
    bind(r, r.whileCond, b.when);
    bind(r, r.ifCond, b.cond);
    bind(r, r.thenResp, b.then);
    if (r.elseResp) bind(r, *r.elseResp, b.otherwise);
    out.reqs.push_back(std::move(b));
  }
  if (!diags.empty()) throw BindError(std::move(diags));
  return out;
}

}  // namespace syn
