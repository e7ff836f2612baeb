use serde::Serialize;

use ordzeta::exactarith::ArithError;
use ordzeta::finmod::FinError;
use ordzeta::hall::HallError;
use ordzeta::orders::OrderError;
use ordzeta::qha::QhaError;
use ordzeta::zeta::ZetaError;

/// What went wrong, as far as the exit code is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// A budget, precision or search cap ran out.
    Resource,
    /// The input does not describe a supported object.
    Input,
    /// A mathematical check failed while computing.
    Math,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskError {
    pub kind: ErrorKind,
    /// Name of the error variant, e.g. `BudgetExceeded`.
    pub error: String,
    pub message: String,
}

impl TaskError {
    pub fn input(message: impl Into<String>) -> Self {
        TaskError { kind: ErrorKind::Input, error: "Invalid".into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Math => 1,
            ErrorKind::Resource | ErrorKind::Input => 2,
        }
    }
}

fn variant_name(debug: String) -> String {
    debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

fn leaf<E: std::fmt::Debug + std::fmt::Display>(kind: ErrorKind, e: &E) -> TaskError {
    TaskError { kind, error: variant_name(format!("{e:?}")), message: e.to_string() }
}

impl From<ArithError> for TaskError {
    fn from(e: ArithError) -> Self {
        use ArithError::*;
        let kind = match e {
            BadRing(_) => ErrorKind::Input,
            PrecisionExhausted(_) | InterpolationUnstable(_) => ErrorKind::Resource,
            NotInvertible(_) | ShiftNonIntegral(_) => ErrorKind::Math,
        };
        leaf(kind, &e)
    }
}

impl From<FinError> for TaskError {
    fn from(e: FinError) -> Self {
        use FinError::*;
        let kind = match e {
            InvalidAlgebra(_) => ErrorKind::Input,
            DecompositionUncertified(_) | BudgetExceeded(_) | CutoffReached(_) => ErrorKind::Resource,
        };
        leaf(kind, &e)
    }
}

impl From<OrderError> for TaskError {
    fn from(e: OrderError) -> Self {
        use OrderError::*;
        let kind = match e {
            Arith(inner) => return inner.into(),
            Fin(inner) => return inner.into(),
            InvalidSpec(_) | UnsupportedModule(_) | NotAnOverring(_) => ErrorKind::Input,
            PrecisionExhausted(_) | Undecided(_) | BudgetExceeded(_) => ErrorKind::Resource,
        };
        leaf(kind, &e)
    }
}

impl From<ZetaError> for TaskError {
    fn from(e: ZetaError) -> Self {
        use ZetaError::*;
        let kind = match e {
            Order(inner) => return inner.into(),
            Arith(inner) => return inner.into(),
            NotGorenstein(_) | ShiftNonIntegral(_) => ErrorKind::Math,
            EmptyChainStep(_) | Unsupported(_) => ErrorKind::Input,
        };
        leaf(kind, &e)
    }
}

impl From<HallError> for TaskError {
    fn from(e: HallError) -> Self {
        use HallError::*;
        let kind = match e {
            Order(inner) => return inner.into(),
            Zeta(inner) => return inner.into(),
            BadField(_) | NotNilpotent(_) | Invalid(_) => ErrorKind::Input,
            BudgetExceeded(_) | InterpolationUnstable(_) => ErrorKind::Resource,
        };
        leaf(kind, &e)
    }
}

impl From<QhaError> for TaskError {
    fn from(e: QhaError) -> Self {
        use QhaError::*;
        let kind = match e {
            Fin(inner) => return inner.into(),
            Order(inner) => return inner.into(),
            Zeta(inner) => return inner.into(),
            NotRejective(_) | HeredityFailed(_) | CatalogIncomplete(_) => ErrorKind::Math,
            NoStabilization(_) | Undecided(_) => ErrorKind::Resource,
        };
        leaf(kind, &e)
    }
}

/// One named yes/no check inside a task or criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn check(name: impl Into<String>, pass: bool) -> Check {
    Check { name: name.into(), pass, detail: None }
}

pub fn check_with(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: Some(detail.into()) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn of(checks: &[Check], error: Option<&TaskError>) -> Status {
        if error.is_some() {
            Status::Error
        } else if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// 0 when everything passed, 2 if anything ran out of resources or had bad
/// input, 1 otherwise.
pub fn exit_code(checks: &[Check], error: Option<&TaskError>) -> i32 {
    match error {
        Some(e) => e.exit_code(),
        None if checks.iter().all(|c| c.pass) => 0,
        None => 1,
    }
}
