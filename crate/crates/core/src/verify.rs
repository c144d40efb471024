//! Verification suites. Each suite checks one family of identities over
//! every tame type or weight of a field datum and stops at the first
//! counterexample. [`Suite::all`] is the full acceptance battery.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{bm_cycle_sum, x_cycle_for_weight, x_special_fibre_cycle, x_ss_steinberg_cycle, z_identity_sides, z_of_type, BasisKind, Cycle};
use crate::error::{Error, Result};
use crate::field_arith::{FieldDatum, Level};
use crate::galois_points::{
    all_niveau_one_data, components_through, datum_for_weight, has_pbt_lift_of_type, match_weights, pbt_lift_types, RamFlag,
};
use crate::groth_solver::{build_decomp_matrix, pairing_defect, solve_n, DecompMatrix, NSolution};
use crate::jh::{all_shapes, jh_factors, jh_set, p_tau};
use crate::oracle;
use crate::tame_types::{enumerate_tame_types, principal_series_ordered, TameType, TypeKind};
use crate::weights::{enumerate_weights, SerreWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Jh,
    Shapes,
    Solve,
    Orth,
    Cycles,
    XSide,
    Galois,
    Oracle,
}

impl Suite {
    pub fn all() -> [Suite; 8] {
        use Suite::*;
        [Jh, Shapes, Solve, Orth, Cycles, XSide, Galois, Oracle]
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jh => "jh",
            Suite::Shapes => "shapes",
            Suite::Solve => "solve",
            Suite::Orth => "orth",
            Suite::Cycles => "cycles",
            Suite::XSide => "xside",
            Suite::Galois => "galois",
            Suite::Oracle => "oracle",
        }
    }

    /// Parses a suite name, `all` expanding to every suite.
    pub fn parse_list(input: &str) -> Result<Vec<Suite>> {
        if input == "all" {
            return Ok(Suite::all().to_vec());
        }
        Ok(vec![Suite::from_str(input)?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        Suite::all()
            .into_iter()
            .find(|s| s.name() == input)
            .ok_or_else(|| Error::parse(input, 0, "unknown suite; expected jh, shapes, solve, orth, cycles, xside, galois, oracle or all"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first failed equality of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Counterexample {
    pub check: String,
    #[serde(rename = "type")]
    pub tau: Option<String>,
    pub weight: Option<String>,
    pub shape: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    fn new(check: &str) -> Self {
        Counterexample { check: check.to_string(), ..Default::default() }
    }

    fn tau(mut self, tau: &TameType) -> Self {
        self.tau = Some(tau.key());
        self
    }

    fn weight(mut self, w: &SerreWeight) -> Self {
        self.weight = Some(w.key());
        self
    }

    fn shape(mut self, s: impl fmt::Display) -> Self {
        self.shape = Some(s.to_string());
        self
    }

    fn sides(mut self, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    fn error(check: &str, e: &Error) -> Self {
        Counterexample::new(check).sides(e, "no error")
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.check)?;
        for (label, v) in [("type", &self.tau), ("weight", &self.weight), ("shape", &self.shape)] {
            if let Some(v) = v {
                write!(f, " {label}={v}")?;
            }
        }
        write!(f, ": {} vs {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

type Outcome = std::result::Result<usize, Box<Counterexample>>;

/// Runs `check` over `items` in parallel; the reported failure is the first
/// one in item order, independent of scheduling.
fn over<T: Sync>(items: &[T], check: impl Fn(&T) -> Outcome + Sync + Send) -> Outcome {
    let results: Vec<Outcome> = items.par_iter().map(&check).collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn ensure(cond: bool, cx: impl FnOnce() -> Counterexample) -> Outcome {
    if cond {
        Ok(1)
    } else {
        Err(Box::new(cx()))
    }
}

/// Shared, lazily computed state for the suites of one field datum.
pub struct Verifier {
    fd: FieldDatum,
    types: Vec<TameType>,
    weights: Vec<SerreWeight>,
    matrix: OnceLock<Result<DecompMatrix>>,
    solutions: OnceLock<Result<BTreeMap<SerreWeight, NSolution>>>,
}

impl Verifier {
    pub fn new(fd: FieldDatum) -> Self {
        Verifier {
            fd,
            types: enumerate_tame_types(&fd),
            weights: enumerate_weights(&fd, false),
            matrix: OnceLock::new(),
            solutions: OnceLock::new(),
        }
    }

    pub fn field(&self) -> &FieldDatum {
        &self.fd
    }

    pub fn matrix(&self) -> Result<&DecompMatrix> {
        self.matrix.get_or_init(|| build_decomp_matrix(&self.fd)).as_ref().map_err(Clone::clone)
    }

    pub fn solutions(&self) -> Result<&BTreeMap<SerreWeight, NSolution>> {
        self.solutions
            .get_or_init(|| {
                let m = self.matrix()?;
                m.rows().par_iter().map(|w| solve_n(m, w).map(|s| (w.clone(), s))).collect()
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn run(&self, suite: Suite) -> SuiteReport {
        let outcome = match suite {
            Suite::Jh => self.jh_structure(),
            Suite::Shapes => self.shape_counts(),
            Suite::Solve => self.solvability(),
            Suite::Orth => self.orthogonality(),
            Suite::Cycles => self.cycle_identities(),
            Suite::XSide => self.x_side(),
            Suite::Galois => self.galois_points(),
            Suite::Oracle => self.oracles(),
        };
        match outcome {
            Ok(checks) => SuiteReport { suite, checks, counterexample: None },
            Err(cx) => SuiteReport { suite, checks: 0, counterexample: Some(*cx) },
        }
    }

    pub fn run_all(&self, suites: &[Suite]) -> Vec<SuiteReport> {
        suites.iter().map(|&s| self.run(s)).collect()
    }

    /// Deterministic kernel combinations used to perturb solutions.
    fn perturbations(&self, index: usize, rank: usize) -> Vec<Vec<i64>> {
        if rank == 0 {
            return Vec::new();
        }
        let mut a = vec![0i64; rank];
        a[index % rank] = 1;
        let mut b = vec![0i64; rank];
        b[(index + 1) % rank] -= 2;
        b[(index + 3) % rank] += 1;
        let c = vec![1i64; rank];
        vec![a, b, c]
    }

    fn jh_structure(&self) -> Outcome {
        let fd = self.fd;
        over(&self.types, |tau| {
            let factors = jh_factors(tau).map_err(|e| Counterexample::error("jh factors", &e).tau(tau))?;
            let shapes = p_tau(tau);
            let mut checks = ensure(factors.len() == shapes.len(), || {
                Counterexample::new("|JH| = |P_tau|").tau(tau).sides(factors.len(), shapes.len())
            })?;
            let distinct: BTreeSet<&SerreWeight> = factors.iter().map(|x| &x.weight).collect();
            checks += ensure(distinct.len() == factors.len(), || {
                Counterexample::new("factors pairwise distinct").tau(tau).sides(distinct.len(), factors.len())
            })?;
            for x in &factors {
                checks += ensure(!x.weight.is_steinberg(), || {
                    Counterexample::new("no Steinberg factor").tau(tau).weight(&x.weight).shape(x.shape).sides("Steinberg", "non-Steinberg")
                })?;
                if tau.is_cuspidal() {
                    let f = fd.f() as usize;
                    checks += ensure((0..f).all(|i| x.s_full[i] == x.s_full[i + f]), || {
                        Counterexample::new("cuspidal s periodicity").tau(tau).shape(x.shape).sides(format!("{:?}", x.s_full), "f-periodic")
                    })?;
                }
            }
            let dim: u64 = factors.iter().map(|x| x.weight.dim()).sum();
            checks += ensure(dim == tau.expected_dim(), || {
                Counterexample::new("dimension identity").tau(tau).sides(dim, tau.expected_dim())
            })?;
            if tau.kind() != TypeKind::Cuspidal {
                let swapped = principal_series_ordered(&fd, tau.eta_prime(), tau.eta())
                    .and_then(|t| jh_set(&t))
                    .map_err(|e| Counterexample::error("order swap", &e).tau(tau))?;
                let a: BTreeSet<SerreWeight> = factors.iter().map(|x| x.weight.clone()).collect();
                let b: BTreeSet<SerreWeight> = swapped.into_iter().map(|x| x.1).collect();
                checks += ensure(a == b, || {
                    Counterexample::new("order swap invariance").tau(tau).sides(format!("{a:?}"), format!("{b:?}"))
                })?;
            }
            Ok(checks)
        })
    }

    fn shape_counts(&self) -> Outcome {
        let fd = self.fd;
        let p = fd.p() as u32;
        let f = fd.f() as usize;
        over(&self.types, |tau| {
            let shapes = p_tau(tau);
            let mut checks = 0;
            match tau.kind() {
                TypeKind::Scalar => {
                    checks += ensure(shapes.len() == 1 && shapes[0].is_empty(), || {
                        Counterexample::new("scalar P_tau = {{}}").tau(tau).sides(format!("{shapes:?}"), "[{}]")
                    })?;
                }
                TypeKind::PrincipalSeries | TypeKind::Cuspidal => {
                    let all = all_shapes(tau);
                    checks += ensure(all.len() == 1 << f, || {
                        Counterexample::new("2^f shapes").tau(tau).sides(all.len(), 1usize << f)
                    })?;
                    let generic = tau.gamma().digits().iter().all(|&g| (1..=p.saturating_sub(2)).contains(&g));
                    if tau.kind() == TypeKind::PrincipalSeries && generic {
                        checks += ensure(shapes.len() == 1 << f, || {
                            Counterexample::new("generic |P_tau| = 2^f").tau(tau).sides(shapes.len(), 1usize << f)
                        })?;
                    }
                    if tau.is_cuspidal() {
                        for j in &shapes {
                            checks += ensure((0..f).all(|i| j.contains(i) != j.contains(i + f)), || {
                                Counterexample::new("cuspidal complementarity").tau(tau).shape(j).sides("i, i+f both in or out", "exactly one")
                            })?;
                        }
                    }
                }
            }
            Ok(checks)
        })
    }

    fn solvability(&self) -> Outcome {
        let m = self.matrix().map_err(|e| Counterexample::error("decomposition matrix", &e))?;
        let mut checks = 0;
        for (j, tau) in m.cols().iter().enumerate() {
            let expected = p_tau(tau).len();
            let got = m.column_support(j).len();
            checks += ensure(got == expected, || Counterexample::new("column sum = |P_tau|").tau(tau).sides(got, expected))?;
        }
        checks += over(m.rows(), |w| {
            let sol = solve_n(m, w).map_err(|e| Counterexample::error("solve_n", &e).weight(w))?;
            let row = m.row_of(w).expect("row");
            ensure(pairing_defect(m, row, &sol).is_none(), || Counterexample::new("M n = e_sigma").weight(w).sides("M n", "e_sigma"))
        })?;
        Ok(checks)
    }

    fn orthogonality(&self) -> Outcome {
        let m = self.matrix().map_err(|e| Counterexample::error("decomposition matrix", &e))?;
        let sols = self.solutions().map_err(|e| Counterexample::error("solve_n", &e))?;
        let rank = m.kernel().rank();
        let indexed: Vec<(usize, &SerreWeight)> = m.rows().iter().enumerate().collect();
        over(&indexed, |&(row, w)| {
            let sol = &sols[w];
            let mut candidates = vec![sol.clone()];
            candidates.extend(self.perturbations(row, rank).iter().map(|c| sol.perturbed(c)));
            let mut checks = 0;
            for cand in &candidates {
                if let Some(d) = pairing_defect(m, row, cand) {
                    return Err(Box::new(
                        Counterexample::new("sum_tau n_tau(sigma) m_sigma'(tau) = delta")
                            .weight(w)
                            .sides(format!("{} at sigma'={}", d.value, d.sigma_prime), d.expected),
                    ));
                }
                // one inner product per sigma'
                checks += m.rows().len();
                checks += ensure(cand.differs_by_kernel(sol) && cand.canonical().dense() == sol.dense(), || {
                    Counterexample::new("perturbation stays in the kernel coset").weight(w).sides("outside coset", "n + ker M")
                })?;
            }
            Ok(checks)
        })
    }

    fn cycle_identities(&self) -> Outcome {
        let m = self.matrix().map_err(|e| Counterexample::error("decomposition matrix", &e))?;
        let sols = self.solutions().map_err(|e| Counterexample::error("solve_n", &e))?;
        let rank = m.kernel().rank();
        let indexed: Vec<(usize, &SerreWeight)> = m.rows().iter().enumerate().collect();
        let mut checks = over(&indexed, |&(row, w)| {
            let unit = Cycle::unit(BasisKind::ZSide, w).expect("non-Steinberg");
            let sol = &sols[w];
            let mut candidates = vec![sol.clone()];
            candidates.extend(self.perturbations(row, rank).iter().map(|c| sol.perturbed(c)));
            let mut checks = 0;
            for cand in &candidates {
                let z = bm_cycle_sum(cand).map_err(|e| Counterexample::error("Z(sigma)", &e).weight(w))?;
                checks += ensure(z == unit, || Counterexample::new("Z(sigma) = [sigma]").weight(w).sides(&z, &unit))?;
            }
            Ok(checks)
        })?;
        checks += over(&self.types, |tau| {
            let z = z_of_type(tau).map_err(|e| Counterexample::error("Z(tau)", &e).tau(tau))?;
            let n = p_tau(tau).len();
            let mut checks = ensure(z.is_reduced_effective() && z.len() == n, || {
                Counterexample::new("Z(tau) reduced effective with |P_tau| terms").tau(tau).sides(&z, format!("{n} unit terms"))
            })?;
            let (lhs, rhs) = z_identity_sides(tau, sols).map_err(|e| Counterexample::error("Z identity", &e).tau(tau))?;
            checks += ensure(lhs == rhs, || Counterexample::new("Z(tau) = sum Z(sigma)").tau(tau).sides(&lhs, &rhs))?;
            Ok(checks)
        })?;
        Ok(checks)
    }

    fn x_side(&self) -> Outcome {
        let fd = self.fd;
        let mut checks = over(&self.types, |tau| {
            let x = x_special_fibre_cycle(tau).map_err(|e| Counterexample::error("special fibre cycle", &e).tau(tau))?;
            let mut checks = ensure(x.support().all(|w| !w.is_steinberg()), || {
                Counterexample::new("no Steinberg label").tau(tau).sides(&x, "non-Steinberg support")
            })?;
            let z = z_of_type(tau).map_err(|e| Counterexample::error("Z(tau)", &e).tau(tau))?.to_x_side();
            checks += ensure(x == z, || Counterexample::new("X-side = image of Z(tau)").tau(tau).sides(&x, &z))?;
            Ok(checks)
        })?;
        let chis: Vec<i128> = (0..fd.m1() as i128).collect();
        checks += over(&chis, |&c| {
            let chi = fd.level_one(c);
            let cyc = x_ss_steinberg_cycle(&fd, chi).map_err(|e| Counterexample::error("Steinberg cycle", &e))?;
            let f = fd.f() as usize;
            let st = SerreWeight::new(&fd, vec![(fd.p() - 1) as u32; f], chi).expect("digits");
            let base = SerreWeight::new(&fd, vec![0; f], chi).expect("digits");
            let mut expected = Cycle::unit(BasisKind::XSide, &base).expect("x-side");
            expected.add_term(&st, &BigInt::one()).expect("x-side");
            ensure(cyc == expected && cyc.len() == 2 && cyc.is_effective() && x_cycle_for_weight(&st) == cyc, || {
                Counterexample::new("Z^(chi St) = X^chi + X^(chi St)").weight(&st).sides(&cyc, &expected)
            })
        })?;
        Ok(checks)
    }

    fn galois_points(&self) -> Outcome {
        let fd = self.fd;
        let data = all_niveau_one_data(&fd);
        // inverse index of datum_for_weight
        let mut fibres: HashMap<_, Vec<&SerreWeight>> = HashMap::new();
        for w in &self.weights {
            let d = datum_for_weight(&fd, w).map_err(|e| Counterexample::error("datum_for_weight", &e).weight(w))?;
            fibres.entry(d).or_default().push(w);
        }
        let z_supports: Vec<BTreeSet<SerreWeight>> = self
            .types
            .iter()
            .map(|t| z_of_type(t).map(|z| z.support().cloned().collect()))
            .collect::<Result<_>>()
            .map_err(|e| Counterexample::error("Z(tau)", &e))?;

        let mut checks = over(&self.weights, |w| {
            let d = datum_for_weight(&fd, w).map_err(|e| Counterexample::error("datum_for_weight", &e).weight(w))?;
            let matched = match_weights(&fd, &d).map_err(|e| Counterexample::error("match_weights", &e).weight(w))?;
            let mut checks = ensure(matched.contains(w), || {
                Counterexample::new("w in match(datum(w))").weight(w).sides(format!("{matched:?}"), w)
            })?;
            let unique = data.iter().any(|x| fibres.get(x).is_some_and(|f| f.len() == 1 && f[0] == w));
            checks += ensure(unique, || Counterexample::new("datum with matched set exactly {sigma}").weight(w).sides("none found", "some datum"))?;
            let comps = components_through(&fd, &d).map_err(|e| Counterexample::error("components_through", &e).weight(w))?;
            let lifts = pbt_lift_types(&fd, &d, &self.types).map_err(|e| Counterexample::error("pbt lift", &e).weight(w))?;
            for ((tau, lift), support) in self.types.iter().zip(lifts).zip(&z_supports) {
                let meets = comps.support().any(|x| support.contains(x));
                checks += ensure(lift == meets, || {
                    Counterexample::new("pbt lift iff supports meet").tau(tau).weight(w).sides(lift, meets)
                })?;
            }
            Ok(checks)
        })?;

        let exhaustive: Vec<_> = data.iter().filter(|d| d.ram_flag() != RamFlag::Tres).collect();
        checks += over(&exhaustive, |d| {
            let matched = match_weights(&fd, d).map_err(|e| Counterexample::error("match_weights", &e))?;
            let expected: BTreeSet<SerreWeight> = fibres.get(*d).map(|f| f.iter().map(|w| (*w).clone()).collect()).unwrap_or_default();
            ensure(matched == expected, || Counterexample::new("match = fibre of datum_for_weight").sides(format!("{d}: {matched:?}"), format!("{expected:?}")))
        })?;

        let tres: Vec<_> = data.iter().filter(|d| d.ram_flag() == RamFlag::Tres).collect();
        checks += over(&tres, |d| {
            let matched = match_weights(&fd, d).map_err(|e| Counterexample::error("match_weights", &e))?;
            let comps = components_through(&fd, d).map_err(|e| Counterexample::error("components_through", &e))?;
            let mut checks = ensure(matched.is_empty() && comps.is_zero(), || {
                Counterexample::new("tres ramifiee matches nothing").sides(format!("{d}: {matched:?}"), "{}")
            })?;
            let lifts = pbt_lift_types(&fd, d, &self.types).map_err(|e| Counterexample::error("pbt lift", &e))?;
            checks += ensure(lifts.iter().all(|l| !l), || Counterexample::new("tres ramifiee has no pbt lift").sides(d, "no tame type"))?;
            if let Some(tau) = self.types.first() {
                let direct = has_pbt_lift_of_type(&fd, d, tau).map_err(|e| Counterexample::error("pbt lift", &e))?;
                checks += ensure(!direct, || Counterexample::new("tres ramifiee has no pbt lift").tau(tau).sides(d, "no lift"))?;
            }
            Ok(checks)
        })?;
        Ok(checks)
    }

    fn oracles(&self) -> Outcome {
        let fd = self.fd;
        let mut checks = 0;

        // digit expansions, when the search space is small
        for level in [Level::One, Level::Two] {
            let n = fd.embeddings(level) as u32;
            if fd.p().pow(n) * fd.modulus(level) > 2_000_000 {
                continue;
            }
            for c in 0..fd.modulus(level) as i128 {
                let c = fd.exponent(c, level);
                let fast = fd.digits_of(c).into_inner();
                let slow = oracle::digits_by_search(&fd, c);
                checks += ensure(slow == vec![fast.clone()], || {
                    Counterexample::new("digits_of vs exhaustive search").sides(format!("{c}: {fast:?}"), format!("{slow:?}"))
                })?;
            }
        }

        let count = |k| self.types.iter().filter(|t| t.kind() == k).count();
        let fast = (count(TypeKind::Scalar), count(TypeKind::PrincipalSeries), count(TypeKind::Cuspidal));
        let slow = oracle::type_counts_by_search(&fd);
        checks += ensure(fast == slow, || Counterexample::new("type counts vs orbit enumeration").sides(format!("{fast:?}"), format!("{slow:?}")))?;

        let m = self.matrix().map_err(|e| Counterexample::error("decomposition matrix", &e))?;
        let sols = self.solutions().map_err(|e| Counterexample::error("solve_n", &e))?;
        let ncols = m.cols().len();
        let (support, bound) = if 5f64.powi(ncols as i32) <= 20_000.0 {
            (ncols, 2)
        } else if oracle::sparse_search_size(ncols, 3, 2) <= 200_000 {
            (3, 2)
        } else {
            (2, 1)
        };
        for (row, v) in oracle::sparse_solutions(m, support, bound) {
            let w = &m.rows()[row];
            let sol = &sols[w];
            let cand = sol.with_coeffs(&v);
            checks += ensure(cand.differs_by_kernel(sol) && cand.canonical().dense() == sol.dense(), || {
                Counterexample::new("searched solution congruent to solve_n mod kernel").weight(w).sides(format!("{v:?}"), format!("{:?}", sol.dense()))
            })?;
        }
        if oracle::maximal_minor_count(m.rows().len(), ncols) <= 10_000 {
            let g = oracle::maximal_minor_gcd(m);
            checks += ensure(g.is_one() == m.spans_lattice() && g.is_one(), || {
                Counterexample::new("gcd of maximal minors").sides(&g, BigInt::one())
            })?;
        }
        Ok(checks)
    }
}

/// Runs `suites` for one field datum.
pub fn run_suites(fd: FieldDatum, suites: &[Suite]) -> Vec<SuiteReport> {
    Verifier::new(fd).run_all(suites)
}
