//! Sequences modulo `m`: multiplicative orders, eventual periods, forbidden
//! residue classes and the primes of bounded period.

mod order;
mod period;
mod support;

pub use order::{multiplicative_order, order_of_two};
pub use period::{holds_on_window, period_mod, term_mod, ModStepper, PeriodRecord};
pub use support::{
    forbidden_classes, lcm_up_to, period_lcm, period_support, period_support_with, support_by_scan,
    ForbiddenClasses, PeriodTable, SupportConfig,
};
