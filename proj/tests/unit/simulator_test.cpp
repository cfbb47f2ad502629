#include <doctest.h>

#include "syn/eval.hpp"
#include "util.hpp"

using namespace syn;
using syn::test::corpus;
using syn::test::slurp;

namespace {

Message I(std::int64_t v) { return present(Value::integer(v)); }

struct Loaded {
  Model m;
  std::unique_ptr<System> sys;
  explicit Loaded(const std::string& text) : m(parse_model(text)) {
    CheckReport r = check_model(m);
    REQUIRE_MESSAGE(r.passes(), r.render());
    sys = std::make_unique<System>(m);
  }
  Stimulus stim(const std::string& text) const { return parse_stimulus(text, m, sys->types()); }
};

const char* kSwitch = R"(model Sw {
  component Sw {
    in speed: Int init 0
    out on: Bool init false
    causality weak
    automaton {
      states Off init, On
      var c: Int init 0
      transition up: Off -> On when speed?v with v > 10 then on = true, c := c + 1
      transition down: On -> Off when speed?v with v < 3 then on = false
    }
  }
})";

const char* kDelay = R"(model Delay {
  component D {
    in i: Int init 0
    out o: Int init 0
    causality strong
    table {
      when i?v then o = v
    }
  }
})";

const char* kOverlap = R"(model Ov {
  component R {
    in a: Int init 0
    out b: Int init 0
    causality weak
    automaton {
      states S init
      transition t1: S -> S when a?v with v > 1 then b = 1
      transition t2: S -> S when a?v with v > 0 then b = 2
    }
  }
})";

const char* kPipeline = R"(model Pipe {
  component P {
    in x: Int init 0
    out y: Int init 0
    out z: Int init 0
    causality weak
    sub A {
      in i: Int init 0
      out o: Int init 0
      causality weak
      table {
        when i?v then o = v * 2
      }
    }
    sub B {
      in i: Int init 0
      out o: Int init 7
      causality strong
      table {
        when i?v then o = v + 1
      }
    }
    sub C {
      in i: Int init 0
      out o: Int init 0
      causality weak
      table {
        when i?v then o = v
      }
    }
    delegate x -> A.i
    channel A.o -> B.i
    channel A.o -> C.i
    delegate B.o -> y
    delegate C.o -> z
  }
})";

}  // namespace

TEST_CASE("init_state") {
  Loaded sw(kSwitch);
  SystemState s = sw.sys->init_state();
  REQUIRE(s.atoms.size() == 1);
  CHECK(s.atoms[0].control == 0);
  CHECK(s.atoms[0].vars == std::vector<Value>{Value::integer(0)});

  Loaded d(kDelay);
  AtomicState a = d.sys->init_atomic(0);
  REQUIRE(a.buffer.size() == 2);
  CHECK(a.buffer[1] == I(0));
  CHECK(d.sys->behavior(0).states.size() == 1);

  Loaded p(kPipeline);
  CHECK(p.sys->init_state().atoms.size() == 3);
}

TEST_CASE("enabled_transitions") {
  Loaded sw(kSwitch);
  AtomicState st = sw.sys->init_atomic(0);
  auto en = sw.sys->enabled_transitions(0, st, {I(12), absent});
  REQUIRE(en.size() == 1);
  CHECK(en[0].index == 0);
  REQUIRE(en[0].binding.size() == 1);
  CHECK(en[0].binding[0].second == Value::integer(12));
  CHECK(sw.sys->enabled_transitions(0, st, {I(5), absent}).empty());

  Loaded ov(kOverlap);
  auto both = ov.sys->enabled_transitions(0, ov.sys->init_atomic(0), {I(5), absent});
  REQUIRE(both.size() == 2);
  CHECK(both[0].index == 0);
  CHECK(both[1].index == 1);
}

TEST_CASE("step_atomic fires, updates and stutters") {
  Loaded sw(kSwitch);
  FirstChooser first;
  AtomicState st = sw.sys->init_atomic(0);
  AtomicStep s1 = sw.sys->step_atomic(0, st, {I(12), absent}, first, 0);
  CHECK(s1.fired == 0);
  CHECK(s1.next.control == 1);
  CHECK(s1.next.vars[0] == Value::integer(1));
  CHECK(s1.outputs[1] == present(Value::boolean(true)));

  AtomicStep idle = sw.sys->step_atomic(0, s1.next, {I(5), absent}, first, 1);
  CHECK(idle.fired == -1);
  CHECK(idle.next == s1.next);
  CHECK(idle.outputs[1] == absent);
}

TEST_CASE("unit delay") {
  Loaded d(kDelay);
  Trace t = [&] {
    FirstChooser first;
    return run(*d.sys, d.stim("0;i=1\n1;i=2\n2;i=3\n"), first, 3);
  }();
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].outputs[0] == I(0));
  CHECK(t.rows[1].outputs[0] == I(1));
  CHECK(t.rows[2].outputs[0] == I(2));
}

TEST_CASE("First picks the declaration-first transition, random is seeded") {
  Loaded ov(kOverlap);
  Stimulus s = ov.stim("0;a=5\n1;a=5\n2;a=5\n");
  FirstChooser first;
  Trace t = run(*ov.sys, s, first, 3);
  for (const auto& row : t.rows) CHECK(row.outputs[0] == I(1));

  std::string many;
  for (int k = 0; k < 64; ++k) many += std::to_string(k) + ";a=5\n";
  Stimulus ms = ov.stim(many);
  RandomChooser r1(42), r2(42), r3(43);
  std::string a = render_trace(run(*ov.sys, ms, r1, 64), *ov.sys);
  CHECK(a == render_trace(run(*ov.sys, ms, r2, 64), *ov.sys));
  CHECK(a != render_trace(run(*ov.sys, ms, r3, 64), *ov.sys));
  CHECK(a.find("b=2") != std::string::npos);
}

TEST_CASE("xorshift sequence is fixed") {
  RandomChooser r(1);
  std::uint64_t x = 1;
  for (int i = 0; i < 5; ++i) {
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    CHECK(r.next() == x * 0x2545F4914F6CDD1DULL);
  }
}

TEST_CASE("pipeline and fan-out") {
  Loaded p(kPipeline);
  FirstChooser first;
  Trace t = run(*p.sys, p.stim("0;x=1\n1;x=2\n2;x=-\n"), first, 3);
  REQUIRE(t.rows.size() == 3);
  // y: B delays A's doubled value by one tick; z: C copies it at once.
  CHECK(t.rows[0].outputs == std::vector<Message>{I(7), I(2)});
  CHECK(t.rows[1].outputs == std::vector<Message>{I(3), I(4)});
  CHECK(t.rows[2].outputs == std::vector<Message>{I(5), absent});

  SystemState st = p.sys->init_state();
  TickResult r = p.sys->step_system(st, {I(3)}, first, 0);
  int b = p.m.root.composite() ? p.sys->flat().find("B") : -1;
  int c = p.sys->flat().find("C");
  REQUIRE(b >= 0);
  REQUIRE(c >= 0);
  CHECK(r.ports[b][0] == I(6));
  CHECK(r.ports[c][0] == I(6));
}

TEST_CASE("run: zero ticks, corpus acceleration, errors") {
  Loaded d(kDelay);
  FirstChooser first;
  Trace empty = run(*d.sys, d.stim("0;i=1\n"), first, 0);
  CHECK(empty.rows.empty());
  CHECK(render_trace(empty, *d.sys).empty());

  Loaded cruise(slurp(corpus("cruise.syn")));
  Stimulus s = cruise.stim(slurp(corpus("cruise.stim")));
  Trace t = run(*cruise.sys, s, first, s.rows.size());
  REQUIRE(t.rows.size() >= 5);
  // Outputs: throttle, fault, engaged.
  CHECK(t.rows[0].outputs[2] == present(Value::boolean(true)));
  CHECK(t.rows[3].outputs[0] == absent);
  CHECK(t.rows[4].outputs[0] == I(3));
  CHECK(t.rows[2].outputs[0] == absent);
  CHECK(render_trace(t, *cruise.sys) == [&] {
    FirstChooser again;
    return render_trace(run(*cruise.sys, s, again, s.rows.size()), *cruise.sys);
  }());

  Loaded div(R"(model Dz {
  component R {
    in a: Int init 0
    out b: Int init 0
    causality weak
    table {
      when a?v then b = 10 div v
    }
  }
})");
  Trace bad = run(*div.sys, div.stim("0;a=5\n1;a=0\n2;a=1\n"), first, 3);
  CHECK(bad.rows.size() == 1);
  REQUIRE(bad.error);
  CHECK(bad.error->tick == 1);
  CHECK(bad.error->kind == EvalErrorKind::DivisionByZero);
  CHECK(render_trace(bad, *div.sys) == "0;a=5;b=2\n!error;1;DivisionByZero;R\n");
}

TEST_CASE("table evaluation agrees with its derived automaton") {
  Loaded cruise(slurp(corpus("cruise.syn")));
  const ComponentSpec* buttons = cruise.m.root.find_sub("Buttons");
  REQUIRE(buttons);
  Automaton a = derive_automaton(*buttons->table());
  CHECK(a.states.size() == 1);
  CHECK(a.transitions.size() == buttons->table()->rows.size());
  auto out = eval_table(*buttons, *buttons->table(), {present(Value::enumeration(cruise.sys->types().find_type("Lever"), 2)),
                                                     present(Value::boolean(false)), absent},
                        cruise.sys->types());
  REQUIRE(out.size() == 3);
  CHECK(out[2] == present(Value::enumeration(cruise.sys->types().find_type("Request"), 2)));
}
