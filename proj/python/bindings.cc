// Copyright 2026 The Polich Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python surface over the constrained decoder. Tokens cross the boundary as
// plain spellings; a session is a decoder state plus its configuration.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "polich/cli.h"
#include "polich/fsa.h"
#include "polich/logic.h"

namespace py = pybind11;

namespace {

using polich::DecodeConfig;
using polich::DecoderState;
using polich::Token;

struct BadConfig : polich::Error { using Error::Error; };
struct IllegalToken : polich::Error { using Error::Error; };
struct Incomplete : polich::Error { using Error::Error; };
struct ClosedSession : polich::Error { using Error::Error; };
struct ParseFailure : polich::Error { using Error::Error; };

// Invariant: once closed, every operation raises ClosedSession. After
// finish() the state is Done and step() raises IllegalToken.
class Session {
 public:
  Session(DecoderState state, DecodeConfig config)
      : state_(std::move(state)), config_(config) {}

  std::vector<std::string> Mask() const {
    Check();
    if (finished_ || state_.unused_count() == 0) return {};
    return Spelled(polich::ValidTokens(state_, config_));
  }

  std::vector<std::string> Step(const std::string& word) {
    Check();
    if (finished_) throw IllegalToken("session already finished");
    polich::TokenSequence tokens;
    try {
      tokens = polich::Tokenize(word);
    } catch (const polich::Error& e) {
      throw IllegalToken(e.what());
    }
    if (tokens.size() != 1) throw IllegalToken("expected one token, got '" + word + "'");
    if (state_.unused_count() == 0) {
      throw IllegalToken("every question is used; call finish()");
    }
    try {
      state_ = polich::NextState(state_, tokens.front(), config_);
    } catch (const polich::IllegalTransitionError& e) {
      throw IllegalToken(e.what());
    }
    return Mask();
  }

  std::vector<std::string> Finish() {
    Check();
    if (finished_) return {};
    if (state_.unused_count() != 0) {
      throw Incomplete(std::to_string(state_.unused_count()) +
                       " question(s) still unused");
    }
    const polich::TokenSequence suffix = polich::ClosingSuffix(state_);
    state_ = polich::Finish(state_);
    finished_ = true;
    return Spelled(suffix);
  }

  void Close() { closed_ = true; }
  bool closed() const { return closed_; }

 private:
  static std::vector<std::string> Spelled(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (Token t : tokens) out.push_back(polich::Spell(t));
    return out;
  }

  void Check() const {
    if (closed_) throw ClosedSession("session is closed");
  }

  DecoderState state_;
  DecodeConfig config_;
  bool finished_ = false;
  bool closed_ = false;
};

Session OpenSession(int question_count, bool strict_replay,
                    bool allow_double_negation, int max_nesting_depth,
                    bool max_open_budget_rule) {
  DecodeConfig config;
  config.strict_replay = strict_replay;
  config.allow_double_negation = allow_double_negation;
  config.max_nesting_depth = max_nesting_depth;
  config.max_open_budget_rule = max_open_budget_rule;
  try {
    config.Validate();
    return Session(DecoderState::Initial(question_count), config);
  } catch (const polich::Error& e) {
    throw BadConfig(e.what());
  }
}

polich::ExprTree ParseOrRaise(const std::string& text) {
  try {
    return polich::ParseExpr(text);
  } catch (const polich::Error& e) {
    throw ParseFailure(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_polich, m) {
  m.doc() = "Constrained decoding of Boolean expression trees";

  py::register_exception<BadConfig>(m, "BadConfig", PyExc_ValueError);
  py::register_exception<IllegalToken>(m, "IllegalToken", PyExc_ValueError);
  py::register_exception<Incomplete>(m, "Incomplete", PyExc_RuntimeError);
  py::register_exception<ClosedSession>(m, "ClosedSession", PyExc_RuntimeError);
  py::register_exception<ParseFailure>(m, "ParseError", PyExc_ValueError);

  py::class_<Session>(m, "Session")
      .def_property_readonly("mask", &Session::Mask,
                             "Tokens allowed next; empty once every question is used")
      .def_property_readonly("closed", &Session::closed);

  m.def("open_session", &OpenSession, py::arg("question_count"),
        py::kw_only(), py::arg("strict_replay") = false,
        py::arg("allow_double_negation") = false,
        py::arg("max_nesting_depth") = 3, py::arg("max_open_budget_rule") = true,
        "Fresh decoder session over question_count questions");
  m.def("step", &Session::Step, py::arg("session"), py::arg("token"),
        "Append a token and return the next mask");
  m.def("finish", &Session::Finish, py::arg("session"),
        "Closing parentheses that complete the expression");
  m.def("close_session", &Session::Close, py::arg("session"));
  m.def("is_valid", [](const std::string& text) { return polich::IsValid(text); },
        py::arg("text"));
  m.def("equivalent",
        [](const std::string& a, const std::string& b) {
          return polich::Equivalent(ParseOrRaise(a), ParseOrRaise(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("version", &polich::Version);
}
