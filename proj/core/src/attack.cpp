#include "crashmod/attack.hpp"

#include <algorithm>

#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"

namespace crashmod {

Bigint reduce_ciphertext(const Ciphertext& ct, const Bigint& n_hat,
                         std::size_t n_bits) {
  if (n_hat < 3 || mpz_even_p(n_hat.get_mpz_t())) {
    throw InvalidModulus("reduce_ciphertext: candidate modulus must be odd");
  }
  Bigint reduced = ct.value % n_hat;
  if (ct.scheme == Scheme::Ramon) {
    // undo the Montgomery factor the tag applied; R is fixed by the true
    // modulus width even though the candidate may be shorter
    reduced = (reduced * pow2(n_bits)) % n_hat;
  }
  return reduced;
}

std::vector<Bigint> lift_root_to_message(const Bigint& root,
                                         const Bigint& n_hat,
                                         const Bigint& n) {
  std::vector<Bigint> out;
  for (Bigint v = root; v < n; v += n_hat) out.push_back(v);
  return out;
}

namespace {

double consumed_fraction(const FactorBudget& budget, const FactorOutcome& fo) {
  if (budget.unlimited) return 0;
  if (fo.status == FactorStatus::TimedOut) return 1;
  double frac;
  if (budget.op_limit) {
    if (*budget.op_limit == 0) return 1;
    frac = static_cast<double>(fo.ops) / static_cast<double>(*budget.op_limit);
  } else {
    double limit = static_cast<double>(budget.wall_limit.count());
    if (limit <= 0) return 1;
    frac = fo.elapsed.count() / limit;
  }
  return std::clamp(frac, 0.0, 1.0);
}

}  // namespace

AttackOutcome run_attack(const AttackInput& input, const CandidateLogger& log) {
  if (input.scheme == Scheme::Wipr && !input.wipr) {
    throw Precondition("run_attack: WIPR attack needs WiprParams");
  }
  if (input.scheme == Scheme::Ramon && !input.ramon) {
    throw Precondition("run_attack: RAMON attack needs RamonParams");
  }
  if (input.scheme == Scheme::Raw) {
    throw Precondition("run_attack: raw ciphertexts carry no matchable format");
  }
  auto t0 = std::chrono::steady_clock::now();
  AttackOutcome out;
  std::size_t n_bits = bit_length(input.modulus);

  std::vector<Bigint> candidates = candidate_moduli(input.modulus, input.fault);
  bool byte_crash = input.fault.model == FaultModel::ByteCrash;

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const Bigint& n_hat = candidates[ci];
    CandidateReport report;
    report.pattern = byte_crash ? static_cast<unsigned>(ci + 1) : 0;
    ++out.candidates_processed;

    if (n_hat < 3) {  // a skip fault on a degenerate modulus image
      if (log) log(report);
      continue;
    }

    FactorOutcome fo = factorize(n_hat, input.budget);
    report.factor_status = fo.status;
    report.factor_ms = fo.elapsed.count();
    report.factor_ops = fo.ops;
    out.factor_ms_total += fo.elapsed.count();
    out.budget_units += consumed_fraction(input.budget, fo);
    if (fo.status == FactorStatus::TimedOut) {
      if (log) log(report);
      continue;
    }
    ++out.factor_successes;
    report.omega = fo.factorization.omega();
    report.square_free = is_square_free(fo.factorization);
    out.omega_values.push_back(report.omega);
    if (report.square_free) ++out.squarefree_candidates;

    auto s0 = std::chrono::steady_clock::now();
    bool recovered = false;
    try {
      Bigint c_hat = reduce_ciphertext(input.ciphertext, n_hat, n_bits);
      report.eta = count_roots(c_hat, fo.factorization);
      if (report.eta != 0 && report.eta <= input.root_limit) {
        RootSet roots =
            all_roots_mod(c_hat, fo.factorization, input.root_limit);
        for (const Bigint& root : roots.roots) {
          for (const Bigint& lifted :
               lift_root_to_message(root, n_hat, input.modulus)) {
            ++report.roots_tried;
            std::optional<FormattedMessage> msg;
            if (input.scheme == Scheme::Wipr) {
              msg = wipr_extract(lifted, input.challenge, *input.wipr);
            } else {
              msg = ramon_extract(lifted, input.challenge, *input.ramon);
            }
            if (msg) {
              out.status = AttackStatus::Recovered;
              out.message = std::move(msg);
              out.matched_pattern = report.pattern;
              out.matched_modulus = n_hat;
              recovered = true;
              break;
            }
          }
          if (recovered) break;
        }
      } else if (report.eta > input.root_limit) {
        report.root_overflow = true;
      }
    } catch (const RootOverflow&) {
      report.root_overflow = true;  // huge root set: useless candidate
    }
    double solve_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s0)
            .count();
    report.solve_ms = solve_ms;
    out.solve_ms_total += solve_ms;
    if (log) log(report);
    if (recovered) break;
  }

  out.elapsed = std::chrono::steady_clock::now() - t0;
  return out;
}

}  // namespace crashmod
