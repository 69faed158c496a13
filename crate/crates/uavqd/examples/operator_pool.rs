//! Enumerate the weight-limited Pauli pools the adaptive engine draws from.

use uavqd::pauli::build_pool;

fn main() -> uavqd::Result<()> {
    let pool = build_pool(2, 2)?;
    println!("2 qubits, weight <= 2 ({} operators):", pool.len());
    for p in &pool.members {
        println!("  {p}");
    }

    println!("\npool sizes for the vectorized models:");
    for (label, n, w) in [
        ("single qubit (2 vectorized)", 2, 1),
        ("3 qubits (6 vectorized)", 6, 2),
        ("3 qubits (6 vectorized)", 6, 4),
    ] {
        let pool = build_pool(n, w)?;
        println!("  {label}, weight <= {w}: {}", pool.len());
    }
    Ok(())
}
