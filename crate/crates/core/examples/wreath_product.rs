//! Leaf cycle types of the iterated wreath product, by enumeration.
use odoni::permgroup::{enumerate_wreath, leaf_type_distribution, wreath_order, Perm, TreeAutomorphism};

fn main() -> odoni::Result<()> {
    for (d, n) in [(2, 2), (2, 3), (3, 2)] {
        println!("|[S_{d}]^{n}| = {} = {}", wreath_order(d, n), enumerate_wreath(d, n)?.len());
    }
    for (ty, freq) in leaf_type_distribution(2, 2)? {
        println!("{ty:?}: {freq}");
    }

    let mut a = TreeAutomorphism::identity(2, 2);
    a.set_label(&[], Perm::transposition(2, 0, 1));
    a.set_label(&[0], Perm::transposition(2, 0, 1));
    println!("leaf action {} has type {:?}", a.leaf_action(), a.leaf_cycle_type());
    Ok(())
}
