#include "kronrank/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>

#include "kronrank/algebraic.hpp"
#include "kronrank/bounds.hpp"
#include "kronrank/boolmat.hpp"
#include "kronrank/cover.hpp"
#include "kronrank/crown.hpp"
#include "kronrank/error.hpp"
#include "kronrank/spanoid.hpp"
#include "textio.hpp"

namespace kronrank::cli {

namespace {

template <typename T, typename Reader>
T read_file(const std::string& path, Reader reader) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  return reader(f);
}

BoolMatrix load_matrix(const std::string& p) {
  return read_file<BoolMatrix>(p, [](std::istream& in) { return read_matrix(in); });
}
Cover load_cover(const std::string& p) {
  return read_file<Cover>(p, [](std::istream& in) { return read_cover(in); });
}
MatrixFamily load_family(const std::string& p) {
  return read_file<MatrixFamily>(p, [](std::istream& in) { return read_family(in); });
}
std::vector<std::vector<std::size_t>> load_sets(const std::string& p) {
  return read_file<std::vector<std::vector<std::size_t>>>(p, [](std::istream& in) { return read_sets(in); });
}

std::uint64_t materialization_limit() {
  const char* v = std::getenv(kLimitEnv);
  if (!v || !*v) return kDefaultMaterializationLimit;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end || x == 0) throw InvalidArgument(std::string(kLimitEnv) + " must be a positive integer");
  return x;
}

// Writes to the -o file when given, else to out.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& w) {
  if (path.empty()) {
    w(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  w(f);
}

std::string entry_text(const char* name, const std::optional<Entry>& e) {
  if (!e) return "";
  return std::string(" ") + name + "=" + std::to_string(e->first) + "," + std::to_string(e->second);
}

int report(std::ostream& out, const Verdict& v) {
  if (v.ok) {
    out << "OK\n";
    return kOk;
  }
  out << "FAIL " << v.detail << entry_text("entry", v.entry);
  if (v.index) out << " rect=" << *v.index;
  out << '\n';
  return kVerificationFailed;
}

int report(std::ostream& out, const KronVerdict& v) {
  if (v.ok) {
    out << "OK selections=" << v.selections_checked << '\n';
    return kOk;
  }
  out << "FAIL " << v.detail << entry_text("a_entry", v.a_entry) << entry_text("b_entry", v.b_entry) << '\n';
  return kVerificationFailed;
}

int report(std::ostream& out, const QCoverResult& r) {
  out << (r.ok ? "OK" : "FAIL") << (r.exhaustive ? " exhaustive" : " sampled") << " subsets=" << r.subsets_checked;
  if (!r.ok) out << " subset=" << textio::join_indices(r.witness_subset) << entry_text("entry", r.witness_entry);
  out << '\n';
  return r.ok ? kOk : kVerificationFailed;
}

std::string rational_text(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::vector<BitVector> to_bitsets(const Spanoid& s, const std::vector<std::vector<std::size_t>>& sets) {
  std::vector<BitVector> out;
  for (const auto& x : sets) out.push_back(s.make_set(x));
  return out;
}

int print_rank(std::ostream& out, const SpanoidRank& r) {
  if (r.exact) {
    out << "RANK " << r.upper << '\n' << "WITNESS " << (r.witness.empty() ? "-" : textio::join_indices(r.witness)) << '\n';
    return kOk;
  }
  out << "RANK-BOUNDS lower=" << r.lower << " upper=" << r.upper << '\n';
  return kBudgetExceeded;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boolean rank covers of matrices and their Kronecker products", "kronrank"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Upper bound on worker threads (0 = all cores)");

  std::function<int()> action;
  std::string output;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };
  auto with_output = [&](CLI::App* s) { s->add_option("-o,--output", output, "Output file (default stdout)"); };

  // sigma
  std::uint64_t n_arg = 0, m_arg = 0;
  {
    auto* s = leaf(&app, "sigma", "Print sigma(n), the Boolean rank of C_n");
    s->add_option("n", n_arg)->required()->check(CLI::PositiveNumber);
    s->callback([&] { action = [&] { out << sigma(n_arg) << '\n'; return kOk; }; });
  }
  // crown
  {
    auto* s = leaf(&app, "crown", "Write the crown matrix C_n");
    s->add_option("n", n_arg)->required()->check(CLI::PositiveNumber);
    with_output(s);
    s->callback([&] {
      action = [&] {
        emit(output, out, [&](std::ostream& o) { write_matrix(o, crown_matrix(n_arg)); });
        return kOk;
      };
    });
  }
  // kron
  std::string file_a, file_b, file_c, file_d;
  {
    auto* s = leaf(&app, "kron", "Write the Kronecker product of two matrices");
    s->add_option("A", file_a)->required();
    s->add_option("B", file_b)->required();
    with_output(s);
    s->callback([&] {
      action = [&] {
        const BoolMatrix p = kronecker(load_matrix(file_a), load_matrix(file_b), materialization_limit());
        emit(output, out, [&](std::ostream& o) { write_matrix(o, p); });
        return kOk;
      };
    });
  }
  // sets
  std::uint64_t k_arg = 0, r_arg = 0;
  {
    auto* s = leaf(&app, "sets", "Write the first n ceil(k/2)-subsets of [k] in colex order");
    s->add_option("k", k_arg)->required();
    s->add_option("n", n_arg)->required();
    with_output(s);
    s->callback([&] {
      action = [&] {
        emit(output, out, [&](std::ostream& o) { write_subset_family(o, canonical_family(k_arg, n_arg)); });
        return kOk;
      };
    });
  }

  // cover ...
  auto* cover = app.add_subcommand("cover", "Construct covers and coverable families");
  cover->require_subcommand(1);
  cover->fallthrough();
  {
    auto* s = leaf(cover, "canonical", "Cover of C_n by the sigma(n) rectangles P_F(t)");
    s->add_option("n", n_arg)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
    with_output(s);
    s->callback([&] {
      action = [&] {
        const std::size_t k = sigma(n_arg);
        std::vector<unsigned> all;
        for (unsigned t = 1; t <= k; ++t) all.push_back(t);
        const Cover c = intersection_cover(canonical_family(k, n_arg), all);
        emit(output, out, [&](std::ostream& o) { write_cover(o, c); });
        return kOk;
      };
    });
  }
  {
    auto* s = leaf(cover, "triple", "(r, k-r, k-r)-coverable triple for C_n, n = C(k, ceil(k/2))");
    s->add_option("k", k_arg)->required();
    s->add_option("r", r_arg)->required();
    with_output(s);
    s->callback([&] {
      action = [&] {
        if (r_arg != 1) throw InvalidArgument("cover triple: only r = 1 has a built-in bijection");
        const MatrixFamily f = triple_cover(k_arg, r_arg);
        emit(output, out, [&](std::ostream& o) { write_family(o, f); });
        return kOk;
      };
    });
  }
  {
    auto* s = leaf(cover, "c5", "The (2,2,3)-coverable triple for C_5");
    with_output(s);
    s->callback([&] {
      action = [&] {
        emit(output, out, [&](std::ostream& o) { write_family(o, c5_triple()); });
        return kOk;
      };
    });
  }
  {
    auto* s = leaf(cover, "c4", "A (2,2,2)-coverable triple for C_4");
    with_output(s);
    s->callback([&] {
      action = [&] {
        emit(output, out, [&](std::ostream& o) { write_family(o, c4_triple()); });
        return kOk;
      };
    });
  }
  {
    auto* s = leaf(cover, "gap", "Cover of C_n (x) C_m smaller than sigma(n) sigma(m)");
    s->add_option("n", n_arg)->required();
    s->add_option("m", m_arg)->required();
    with_output(s);
    s->callback([&] {
      action = [&] {
        const GapCover g = gap_cover(n_arg, m_arg);
        err << "size " << g.cover.size() << " (sigma product " << sigma(n_arg) * sigma(m_arg) << ")\n";
        emit(output, out, [&](std::ostream& o) { write_cover(o, g.cover); });
        return kOk;
      };
    });
  }
  std::size_t d_arg = 0, q_arg = 0, s_arg = 0;
  {
    auto* s = leaf(cover, "algebraic", "Family of p-1 matrices, every q of which cover C_{p^q}");
    s->add_option("d", d_arg)->required();
    s->add_option("q", q_arg)->required();
    with_output(s);
    s->callback([&] {
      action = [&] {
        const AlgebraicFamily af = algebraic_family(d_arg, q_arg, materialization_limit());
        const std::size_t sz = 2 * q_arg;
        out << params_line(af.params, sz, sz * 4 * d_arg * d_arg) << '\n';
        QCoverOptions opts;
        opts.threads = threads;
        const int code = report(out, check_q_covering(crown_matrix(af.params.n), af.family, q_arg, opts));
        if (!output.empty()) emit(output, out, [&](std::ostream& o) { write_family(o, af.family); });
        return code;
      };
    });
  }
  {
    auto* s = leaf(cover, "asymptotic", "Parameter report for C_n (x) C_n, and the composed cover when feasible");
    s->add_option("n", n_arg)->required();
    s->add_option("--d", d_arg, "Half-block size (with --q and --s selects the generalized route)");
    s->add_option("--q", q_arg, "Covering threshold");
    s->add_option("--s", s_arg, "Number of members used");
    with_output(s);
    s->callback([&] {
      action = [&] {
        const std::uint64_t limit = materialization_limit();
        if (d_arg == 0 && q_arg == 0 && s_arg == 0) {
          const AsymptoticResult r = asymptotic_cover(n_arg, limit);
          out << params_line(r.params) << '\n';
          if (!r.cover) {
            out << "NOTE " << r.note << '\n';
            return kOk;
          }
          out << "COMPOSED n=" << r.cover->n << " size=" << r.cover->size << " bound=" << r.cover->bound << '\n';
          return r.cover->verified() ? kOk : kVerificationFailed;
        }
        if (d_arg == 0 || q_arg == 0 || s_arg == 0) throw InvalidArgument("cover asymptotic: give all of --d, --q, --s");
        const ComposedCrownCover c = composed_crown_cover(d_arg, q_arg, s_arg, n_arg, limit, threads);
        const AlgebraicCoverParams p = algebraic_params(d_arg, q_arg, limit);
        out << params_line(p, s_arg, c.bound) << '\n';
        out << "COMPOSED n=" << c.n << " size=" << c.size << " bound=" << c.bound << " sigma_squared="
            << sigma(c.n) * sigma(c.n) << '\n';
        out << "HALF ";
        report(out, c.half);
        out << "HYPOTHESES ";
        report(out, c.hypotheses);
        if (!output.empty()) emit(output, out, [&](std::ostream& o) { write_family(o, c.family); });
        return c.verified() ? kOk : kVerificationFailed;
      };
    });
  }

  // verify ...
  auto* verify = app.add_subcommand("verify", "Check certificates");
  verify->require_subcommand(1);
  verify->fallthrough();
  std::string kron_b;
  {
    auto* s = leaf(verify, "cover", "Check that a cover certifies a matrix (or A (x) B with --kron B)");
    s->add_option("matrix", file_a)->required();
    s->add_option("cover", file_c)->required();
    s->add_option("--kron", kron_b, "Verify against the product matrix (x) this matrix without materializing it");
    s->callback([&] {
      action = [&] {
        const BoolMatrix a = load_matrix(file_a);
        const Cover c = load_cover(file_c);
        if (kron_b.empty()) return report(out, verify_cover(a, c));
        return report(out, verify_kron_cover(a, load_matrix(kron_b), c, materialization_limit()));
      };
    });
  }
  {
    auto* s = leaf(verify, "kron", "Check the composition hypotheses for (A, M) and (B, N)");
    s->add_option("A", file_a)->required();
    s->add_option("famM", file_b)->required();
    s->add_option("B", file_c)->required();
    s->add_option("famN", file_d)->required();
    s->callback([&] {
      action = [&] {
        const MatrixFamily m = load_family(file_b), nf = load_family(file_d);
        const KronVerdict v = verify_kron_hypotheses(load_matrix(file_a), m, load_matrix(file_c), nf);
        const int code = report(out, v);
        if (v.ok && m.has_decompositions() && nf.has_decompositions()) out << "SIZE " << composed_size(m, nf) << '\n';
        return code;
      };
    });
  }
  std::uint64_t seed = QCoverOptions{}.seed, budget = QCoverOptions{}.budget;
  {
    auto* s = leaf(verify, "qcover", "Check that every q members of a family cover a matrix");
    s->add_option("matrix", file_a)->required();
    s->add_option("family", file_b)->required();
    s->add_option("q", q_arg)->required()->check(CLI::PositiveNumber);
    s->add_option("--seed", seed, "Seed for sampling mode");
    s->add_option("--budget", budget, "Subsets checked exhaustively before sampling");
    s->callback([&] {
      action = [&] {
        QCoverOptions opts;
        opts.seed = seed;
        opts.budget = budget;
        opts.threads = threads;
        return report(out, check_q_covering(load_matrix(file_a), load_family(file_b), q_arg, opts));
      };
    });
  }

  // rank / bound / isolation / mu
  std::size_t limit_arg = SIZE_MAX;
  std::uint64_t nodes = kDefaultRankNodeBudget;
  {
    auto* rank = app.add_subcommand("rank", "Boolean rank");
    rank->require_subcommand(1);
    rank->fallthrough();
    auto* s = leaf(rank, "exact", "Exact Boolean rank with an upper and a lower certificate");
    s->add_option("matrix", file_a)->required();
    s->add_option("--limit", limit_arg, "Stop once no cover smaller than this exists");
    s->add_option("--budget", nodes, "Search node budget");
    s->callback([&] {
      action = [&] {
        const RankCertificate c = exact_boolean_rank(load_matrix(file_a), limit_arg, nodes);
        write_certificate(out, c);
        if (c.exact) return kOk;
        err << "rank not determined: at least " << c.value << ", at most " << c.upper.size() << '\n';
        return c.budget_exhausted ? kBudgetExceeded : kOk;
      };
    });
  }
  {
    auto* bound = app.add_subcommand("bound", "Lower bounds");
    bound->require_subcommand(1);
    bound->fallthrough();
    auto* s = leaf(bound, "lower", "Lower bound on the Boolean rank of A (x) B");
    s->add_option("A", file_a)->required();
    s->add_option("B", file_b)->required();
    s->callback([&] {
      action = [&] {
        const KronLowerBound b = kron_lower_bound(load_matrix(file_a), load_matrix(file_b));
        out << "LOWER kind=mu value=" << b.value << '\n';
        if (b.isolation_value) out << "LOWER kind=isolation value=" << *b.isolation_value << '\n';
        err << "mu(A)=" << rational_text(b.mu_a) << " mu(B)=" << rational_text(b.mu_b) << " R(A)=" << b.rank_a
            << " R(B)=" << b.rank_b << '\n';
        return kOk;
      };
    });
  }
  {
    auto* s = leaf(&app, "isolation", "Largest isolation set");
    s->add_option("matrix", file_a)->required();
    s->add_option("--budget", nodes, "Search node budget");
    s->callback([&] {
      action = [&] {
        const IsolationResult r = isolation_number(load_matrix(file_a), nodes);
        out << (r.exact ? "ISOLATION " : "ISOLATION-AT-LEAST ") << r.value << '\n';
        for (const auto& [i, j] : r.witness) out << i << ',' << j << '\n';
        return r.exact ? kOk : kBudgetExceeded;
      };
    });
  }
  {
    auto* s = leaf(&app, "mu", "Ones divided by the largest all-ones rectangle");
    s->add_option("matrix", file_a)->required();
    s->callback([&] {
      action = [&] {
        const MuResult r = mu(load_matrix(file_a));
        out << "MU " << rational_text(r.value) << " ones=" << r.ones << " area=" << r.max_area << '\n';
        out << "R " << textio::join_indices(r.witness.rows) << " C " << textio::join_indices(r.witness.cols) << '\n';
        return kOk;
      };
    });
  }

  // spanoid ...
  auto* sp = app.add_subcommand("spanoid", "Spanoid rank and product bounds");
  sp->require_subcommand(1);
  sp->fallthrough();
  std::size_t max_size = SpanoidRankOptions{}.max_size;
  {
    auto* s = leaf(sp, "rank", "Rank of a spanoid");
    s->add_option("file", file_a)->required();
    s->add_option("--max-size", max_size, "Largest subset size searched");
    s->callback([&] {
      action = [&] {
        SpanoidRankOptions o;
        o.max_size = max_size;
        return print_rank(out, spanoid_rank(*load_spanoid(file_a), o));
      };
    });
  }
  {
    auto* s = leaf(sp, "product-rank", "Rank of the product of two spanoids");
    s->add_option("f1", file_a)->required();
    s->add_option("f2", file_b)->required();
    s->add_option("--max-size", max_size, "Largest subset size searched");
    s->callback([&] {
      action = [&] {
        const ProductSpanoid p(load_spanoid(file_a), load_spanoid(file_b));
        SpanoidRankOptions o;
        o.max_size = max_size;
        return print_rank(out, spanoid_rank(p, o));
      };
    });
  }
  {
    auto* s = leaf(sp, "bound", "Check the product hypothesis for M/N sets and print the certified bound");
    s->add_option("f1", file_a)->required();
    s->add_option("f2", file_b)->required();
    s->add_option("msets", file_c)->required();
    s->add_option("nsets", file_d)->required();
    s->callback([&] {
      action = [&] {
        const auto s1 = load_spanoid(file_a), s2 = load_spanoid(file_b);
        const ProductBound b =
            check_product_bound(s1, s2, to_bitsets(*s1, load_sets(file_c)), to_bitsets(*s2, load_sets(file_d)));
        if (b.witness) {
          out << "FAIL hypothesis element=" << *b.witness << '\n';
          return kVerificationFailed;
        }
        if (!b.product_spans) {
          out << "FAIL product not spanned\n";
          return kVerificationFailed;
        }
        out << "BOUND " << b.bound << " set=" << b.spanning_set_size << '\n';
        return kOk;
      };
    });
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kInvalidInput;
  }
  if (!action) {
    err << "no command given\n";
    return kInvalidInput;
  }
  try {
    return action();
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace kronrank::cli
