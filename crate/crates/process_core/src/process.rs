use measure_core::{expectation_weighted, tolerance, Error, Observable, Population, Result, TypeSet};

/// Result of checking the disintegration equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Child weights implied by the kernel, `(μw)_{i′}`.
    pub implied: Vec<f64>,
    /// Per target type `|μ′_{i′} − (μw)_{i′}| / max(1, μ′_{i′}, (μw)_{i′})`.
    pub residuals: Vec<f64>,
    /// Largest residual.
    pub max_residual: f64,
    /// Target positions whose residual exceeds the relative tolerance.
    pub failing: Vec<usize>,
    /// Whether every residual is within tolerance.
    pub passed: bool,
}

impl Diagnostics {
    /// Human-readable residual table listing the failing target types.
    pub fn table(&self, target: &Population) -> String {
        let mut out = String::from("type\texpected\timplied\trel_residual\n");
        for &j in &self.failing {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:e}\n",
                target.types().labels()[j],
                target.weights()[j],
                self.implied[j],
                self.residuals[j]
            ));
        }
        out
    }
}

/// Checks shapes, non-negativity and the disintegration equation
/// `μ′_{i′} = Σ_i w[i][i′] μ_i` within the relative tolerance.
pub fn validate(source: &Population, target: &Population, kernel: &[Vec<f64>]) -> Result<Diagnostics> {
    check_kernel(source.len(), target.len(), kernel)?;
    let implied = push_forward(source.weights(), kernel, target.len());
    let rel = tolerance::current().rel;
    let residuals: Vec<f64> = implied
        .iter()
        .zip(target.weights())
        .map(|(a, b)| (a - b).abs() / 1f64.max(a.abs()).max(b.abs()))
        .collect();
    let failing: Vec<usize> = (0..residuals.len()).filter(|&j| !(residuals[j] <= rel)).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(Diagnostics { implied, residuals, max_residual, passed: failing.is_empty(), failing })
}

fn check_kernel(k: usize, k2: usize, kernel: &[Vec<f64>]) -> Result<()> {
    if kernel.len() != k {
        return Err(Error::Shape(format!("kernel has {} rows for {k} source types", kernel.len())));
    }
    for (i, row) in kernel.iter().enumerate() {
        if row.len() != k2 {
            return Err(Error::Shape(format!("kernel row {i} has {} entries for {k2} target types", row.len())));
        }
        if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Negative(format!("kernel entry [{i}][{j}] = {v}")));
        }
    }
    Ok(())
}

fn push_forward(weights: &[f64], kernel: &[Vec<f64>], k2: usize) -> Vec<f64> {
    (0..k2)
        .map(|j| expectation_weighted(weights, &kernel.iter().map(|row| row[j]).collect::<Vec<_>>()))
        .collect()
}

/// Fitness data of a process.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessData {
    /// Absolute fitness `W(i) = Σ_{i′} w[i][i′]`.
    pub w: Observable,
    /// Selective coefficient `W̄ = N′/N = 𝔼[W]`.
    pub wbar: f64,
    /// Relative fitness `U = W/W̄`, with `𝔼[U] = 1`.
    pub u: Observable,
}

/// A validated evolutionary process `w : μ → μ′`.
#[derive(Debug, Clone, PartialEq)]
pub struct Process {
    source: Population,
    target: Population,
    kernel: Vec<Vec<f64>>,
    fitness: FitnessData,
}

impl Process {
    /// Builds a process, failing with [`Error::Validation`] (carrying the
    /// residual table) when the disintegration equation does not hold.
    pub fn new(source: Population, target: Population, kernel: Vec<Vec<f64>>) -> Result<Self> {
        let diag = validate(&source, &target, &kernel)?;
        if !diag.passed {
            return Err(Error::Validation(format!(
                "disintegration residual {:e} exceeds tolerance\n{}",
                diag.max_residual,
                diag.table(&target)
            )));
        }
        Ok(Self::assemble(source, target, kernel))
    }

    /// Builds a process whose child population is derived from the kernel,
    /// `μ′ = μw`.
    pub fn from_kernel(source: Population, target_types: TypeSet, kernel: Vec<Vec<f64>>) -> Result<Self> {
        check_kernel(source.len(), target_types.len(), &kernel)?;
        let implied = push_forward(source.weights(), &kernel, target_types.len());
        let target = Population::new(target_types, implied)?;
        Ok(Self::assemble(source, target, kernel))
    }

    /// The identity process on `pop`.
    pub fn identity(pop: &Population) -> Self {
        let k = pop.len();
        let kernel = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::assemble(pop.clone(), pop.clone(), kernel)
    }

    fn assemble(source: Population, target: Population, kernel: Vec<Vec<f64>>) -> Self {
        let w_vals: Vec<f64> = kernel.iter().map(|row| measure_core::kahan_sum(row.iter().copied())).collect();
        let wbar = target.size() / source.size();
        let u_vals = w_vals.iter().map(|w| w / wbar).collect();
        let types = source.types().clone();
        let fitness = FitnessData {
            w: Observable::new(types.clone(), w_vals).expect("row count matches"),
            wbar,
            u: Observable::new(types, u_vals).expect("row count matches"),
        };
        Self { source, target, kernel, fitness }
    }

    /// Parent population μ.
    #[inline]
    pub fn source(&self) -> &Population {
        &self.source
    }

    /// Child population μ′.
    #[inline]
    pub fn target(&self) -> &Population {
        &self.target
    }

    /// Kernel rows `w[i][·]`.
    #[inline]
    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    /// Fitness data `W`, `W̄`, `U`.
    #[inline]
    pub fn fitness(&self) -> &FitnessData {
        &self.fitness
    }

    /// Relative fitness values `U(i)`.
    #[inline]
    pub fn u(&self) -> &[f64] {
        self.fitness.u.values()
    }

    /// Absolute fitness values `W(i)`.
    #[inline]
    pub fn w(&self) -> &[f64] {
        self.fitness.w.values()
    }

    /// Selective coefficient `W̄`.
    #[inline]
    pub fn wbar(&self) -> f64 {
        self.fitness.wbar
    }

    /// Whether source and target share a type set.
    pub fn is_endomorphic(&self) -> bool {
        self.source.types() == self.target.types()
    }

    /// Disintegration diagnostics of this (already valid) process.
    pub fn diagnostics(&self) -> Diagnostics {
        validate(&self.source, &self.target, &self.kernel).expect("shapes already validated")
    }

    /// Local average `⟨y⟩_w(i) = Σ_{i′} y(i′) w[i][i′] / W(i)`, defined as 0
    /// where `W(i) = 0`.
    pub fn local_average(&self, y: &Observable) -> Result<Observable> {
        y.check_on(&self.target)?;
        let values = self.local_average_values(y.values());
        Observable::on(&self.source, values)
    }

    /// [`Process::local_average`] on raw values (no type-set check beyond length).
    pub fn local_average_values(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.target.len(), "observable length must match the target");
        self.kernel
            .iter()
            .zip(self.w())
            .map(|(row, &w)| if w > 0.0 { expectation_weighted(row, y) / w } else { 0.0 })
            .collect()
    }

    /// Local change `Δ_w(x, y)(i) = ⟨y⟩_w(i) − x(i)`.
    pub fn local_change(&self, x: &Observable, y: &Observable) -> Result<Observable> {
        x.check_on(&self.source)?;
        let avg = self.local_average(y)?;
        avg.zip_with(x, |a, b| a - b)
    }
}

/// Composition "first `p`, then `q`": the kernel is the matrix product
/// `w_p · w_q`, from `p.source` to `q.target`.
///
/// Requires `p.target` and `q.source` to share a type set and to agree in
/// weights within the relative tolerance.
pub fn compose(p: &Process, q: &Process) -> Result<Process> {
    if p.target.types() != q.source.types() {
        return Err(Error::NotComposable("intermediate type sets differ".into()));
    }
    if !p.target.approx_eq(&q.source, tolerance::current().rel) {
        return Err(Error::NotComposable("intermediate populations differ in weight".into()));
    }
    let k2 = q.target.len();
    let kernel: Vec<Vec<f64>> = p
        .kernel
        .iter()
        .map(|row| {
            (0..k2)
                .map(|l| measure_core::kahan_sum(row.iter().zip(&q.kernel).map(|(a, qr)| a * qr[l])))
                .collect()
        })
        .collect();
    Process::new(p.source.clone(), q.target.clone(), kernel)
}
