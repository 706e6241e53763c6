//! Fixtures shared by the criterion benches.

use ancilla_core::gallery::{example7, example8};
use ancilla_core::numerics::CMatrix;
use ancilla_core::random::{random_hermitian, random_unitary, seeded};
use ancilla_core::{schmidt_decompose, BipartiteUnitary, SchmidtDecomposition, Tolerances};

pub fn hermitian(d: usize) -> CMatrix {
    random_hermitian(d, &mut seeded(d as u64))
}

pub fn haar(d_a: usize, d_b: usize) -> BipartiteUnitary {
    let u = random_unitary(d_a * d_b, &mut seeded(31));
    BipartiteUnitary::new(u, d_a, d_b).expect("Haar sample is unitary")
}

pub fn example7_sd(d: usize) -> SchmidtDecomposition {
    decompose(&example7(d).expect("d >= 3"))
}

pub fn example8_sd(d: usize) -> SchmidtDecomposition {
    decompose(&example8(d).expect("d >= 3"))
}

pub fn decompose(bu: &BipartiteUnitary) -> SchmidtDecomposition {
    schmidt_decompose(bu, &Tolerances::default()).expect("valid unitary")
}
