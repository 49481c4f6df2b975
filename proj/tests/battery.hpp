#pragma once

// Shared formula battery for engine-vs-oracle comparisons.

#include <vector>

#include "osrlab/ctl.hpp"

namespace testutil {

inline std::vector<osrlab::CtlRef> formula_battery(const osrlab::Program& p) {
  using namespace osrlab;
  std::vector<CtlRef> out;
  auto vars = p.all_vars();
  for (const auto& x : vars) {
    out.push_back(ctl::is_live(x));
    out.push_back(ctl::def(x));
    out.push_back(ctl::use(x));
    out.push_back(ctl::until(Dir::Fwd, Quant::Exists, ctl::fnot(ctl::def(x)), ctl::use(x)));
    out.push_back(ctl::until(Dir::Bwd, Quant::All, ctl::tru(), ctl::def(x)));
    out.push_back(ctl::next(Dir::Fwd, Quant::Exists, ctl::use(x)));
    out.push_back(ctl::next(Dir::Bwd, Quant::All, ctl::def(x)));
    for (int l = 1; l <= p.size(); ++l)
      if (defines(p.at(l), x)) out.push_back(ctl::urdef(x, l));
  }
  for (int m = 2; m <= p.size(); ++m) {
    out.push_back(ctl::fnot(
        ctl::until(Dir::Fwd, Quant::Exists, ctl::fnot(ctl::point(2)), ctl::point(m))));
    out.push_back(ctl::until(Dir::Fwd, Quant::All, ctl::tru(), ctl::point(m)));
  }
  if (!vars.empty()) {
    Expr probe = Expr::bin(BinOp::Add, Expr::var(vars.front()), Expr::lit(1));
    out.push_back(ctl::trans(probe));
    out.push_back(ctl::fand({ctl::trans(probe), ctl::fnot(ctl::def(vars.front()))}));
    out.push_back(ctl::next(Dir::Fwd, Quant::All,
                            ctl::fnot(ctl::until(Dir::Fwd, Quant::Exists, ctl::tru(),
                                                 ctl::use(vars.front())))));
  }
  out.push_back(ctl::tru());
  out.push_back(ctl::until(Dir::Fwd, Quant::Exists, ctl::tru(), ctl::stmt(PatSkip{})));
  out.push_back(ctl::until(Dir::Bwd, Quant::Exists, ctl::tru(), ctl::stmt(PatAbort{})));
  return out;
}

}  // namespace testutil
