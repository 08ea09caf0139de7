//! Fault injection for harness self-tests. Not part of the stable API.

use std::cell::Cell;

thread_local! {
    static D3_FAULT: Cell<bool> = const { Cell::new(false) };
}

/// While alive, D3 on the current thread also closes any node holding
/// `F` of a variable.
pub struct FaultGuard(());

impl FaultGuard {
    #[allow(clippy::new_without_default)]
    pub fn new() -> FaultGuard {
        D3_FAULT.with(|c| c.set(true));
        FaultGuard(())
    }
}

impl Drop for FaultGuard {
    fn drop(&mut self) {
        D3_FAULT.with(|c| c.set(false));
    }
}

pub(crate) fn d3_fault() -> bool {
    D3_FAULT.with(Cell::get)
}
