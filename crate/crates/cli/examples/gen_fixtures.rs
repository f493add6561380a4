//! Regenerates the bundled workspace fixtures next to this file.
//!
//! cargo run -p starcone-cli --example gen_fixtures

use std::path::Path;

use starcone_cli::workspace::{FunctionalEntry, HomomorphismEntry, KernelEntry, WorkspaceFile};
use starcone_core::algebra::{build_matrix_algebra, complex_numbers, cyclic_group_algebra, symmetric_group_s3};
use starcone_core::duality::gram_matrix;
use starcone_core::{c64, ComplexMatrix, FiniteStarAlgebra, C64};

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c64(x, 0.0)).collect()
}

fn functional(algebra: &str, values: Vec<C64>) -> FunctionalEntry {
    FunctionalEntry {
        algebra: algebra.into(),
        values,
    }
}

fn gram(alg: &FiniteStarAlgebra, name: &str, values: &[C64]) -> KernelEntry {
    KernelEntry {
        algebra: Some(name.into()),
        matrix: gram_matrix(alg, &starcone_core::Functional::new(values.to_vec())).unwrap(),
    }
}

fn write(dir: &Path, name: &str, ws: &WorkspaceFile) {
    let path = dir.join(name);
    std::fs::write(&path, ws.to_json() + "\n").unwrap();
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");

    // ℤ/2 with ρ_t(e) = 1, ρ_t(g) = t
    let z2 = cyclic_group_algebra(2);
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("z2".into(), z2.clone());
    for (name, t) in [("rho_t1", 1.0), ("rho_t0", 0.0), ("rho_tm1", -1.0)] {
        ws.functionals.insert(name.into(), functional("z2", real(&[1.0, t])));
    }
    ws.kernels.insert("k1".into(), gram(&z2, "z2", &real(&[1.0, 1.0])));
    ws.kernels.insert("km1".into(), gram(&z2, "z2", &real(&[1.0, -1.0])));
    ws.kernels.insert("k0".into(), gram(&z2, "z2", &real(&[1.0, 0.0])));
    ws.kernels.insert("k_zero".into(), gram(&z2, "z2", &real(&[0.0, 0.0])));
    write(&dir, "z2.json", &ws);

    // ℤ/3: trace and the three characters
    let z3 = cyclic_group_algebra(3);
    let w = c64(-0.5, 3f64.sqrt() / 2.0);
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("z3".into(), z3);
    ws.functionals.insert("trace".into(), functional("z3", real(&[1.0, 0.0, 0.0])));
    ws.functionals.insert("chi0".into(), functional("z3", real(&[1.0, 1.0, 1.0])));
    ws.functionals.insert("chi1".into(), functional("z3", vec![c64(1.0, 0.0), w, w * w]));
    ws.functionals.insert("chi2".into(), functional("z3", vec![c64(1.0, 0.0), w.conj(), (w * w).conj()]));
    write(&dir, "z3.json", &ws);

    // S3 in table order e, (12), (13), (23), (123), (132)
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("s3".into(), symmetric_group_s3());
    ws.functionals.insert("trace".into(), functional("s3", real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0])));
    ws.functionals.insert("trivial".into(), functional("s3", real(&[1.0; 6])));
    ws.functionals.insert("sign".into(), functional("s3", real(&[1.0, -1.0, -1.0, -1.0, 1.0, 1.0])));
    write(&dir, "s3.json", &ws);

    // M2 trace, plus M3 for the smoke test
    let m2 = build_matrix_algebra(2);
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("m2".into(), m2.clone());
    ws.algebras.insert("m3".into(), build_matrix_algebra(3));
    ws.functionals.insert("trace".into(), functional("m2", real(&[1.0, 0.0, 0.0, 1.0])));
    ws.functionals.insert(
        "trace3".into(),
        functional("m3", real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])),
    );
    ws.kernels.insert("k_trace".into(), gram(&m2, "m2", &real(&[1.0, 0.0, 0.0, 1.0])));
    write(&dir, "m2.json", &ws);

    // M2 states: vector states and a faithful mixed state
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("m2".into(), m2.clone());
    ws.functionals.insert("e11".into(), functional("m2", real(&[1.0, 0.0, 0.0, 0.0])));
    ws.functionals.insert("e22".into(), functional("m2", real(&[0.0, 0.0, 0.0, 1.0])));
    // x ↦ v^† x v with v = (1, i)/√2
    ws.functionals.insert(
        "plus_i".into(),
        functional("m2", vec![c64(0.5, 0.0), c64(0.0, 0.5), c64(0.0, -0.5), c64(0.5, 0.0)]),
    );
    ws.functionals.insert("mixed".into(), functional("m2", real(&[0.25, 0.0, 0.0, 0.75])));
    ws.kernels.insert("k_e11".into(), gram(&m2, "m2", &real(&[1.0, 0.0, 0.0, 0.0])));
    ws.kernels.insert("k_e22".into(), gram(&m2, "m2", &real(&[0.0, 0.0, 0.0, 1.0])));
    write(&dir, "m2_states.json", &ws);

    // homomorphisms into M2
    let mut ws = WorkspaceFile::default();
    ws.algebras.insert("c".into(), complex_numbers());
    ws.algebras.insert("z2".into(), z2.clone());
    ws.algebras.insert("m2".into(), m2.clone());
    // columns: images of e and g over the matrix units
    let z2_to_m2 = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0], &[0.0, 0.0], &[1.0, -1.0]]);
    ws.homomorphisms.insert(
        "z2_to_m2".into(),
        HomomorphismEntry {
            source: "z2".into(),
            target: "m2".into(),
            matrix: z2_to_m2,
        },
    );
    ws.homomorphisms.insert(
        "unit_m2".into(),
        HomomorphismEntry {
            source: "c".into(),
            target: "m2".into(),
            matrix: ComplexMatrix::from_real(&[&[1.0], &[0.0], &[0.0], &[1.0]]),
        },
    );
    ws.homomorphisms.insert(
        "id_m2".into(),
        HomomorphismEntry {
            source: "m2".into(),
            target: "m2".into(),
            matrix: ComplexMatrix::identity(4),
        },
    );
    ws.functionals.insert("trace".into(), functional("m2", real(&[1.0, 0.0, 0.0, 1.0])));
    ws.functionals.insert("e11".into(), functional("m2", real(&[1.0, 0.0, 0.0, 0.0])));
    ws.kernels.insert("k_trace".into(), gram(&m2, "m2", &real(&[1.0, 0.0, 0.0, 1.0])));
    write(&dir, "homs.json", &ws);
}
