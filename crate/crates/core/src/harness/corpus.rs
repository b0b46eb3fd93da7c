//! Fixed one-variable expressions with base points inside their domains.

pub const DERIVATIVE_CORPUS: &[(&str, &[f64])] = &[
    ("t", &[0.0, 2.5]),
    ("t^2", &[-1.0, 3.0]),
    ("3*t^3 - 2*t + 7", &[0.0, 1.5]),
    ("t^5 - t^4 + t^2/2", &[-0.7, 1.1]),
    ("(t + 1)^6", &[-0.5, 0.3]),
    ("t^(-1)", &[0.5, -2.0]),
    ("1/(1 + t^2)", &[0.0, 1.7]),
    ("(t - 1)/(t + 2)", &[0.0, 3.0]),
    ("t^3/(t^2 + 4)", &[-1.2, 0.8]),
    ("(2*t + 1)^(-2)", &[0.0, 1.0]),
    ("sin(t)", &[0.0, 1.0, -2.3]),
    ("cos(t)", &[0.0, 0.7]),
    ("exp(t)", &[0.0, -1.0, 1.5]),
    ("log(t)", &[0.5, 2.0, 10.0]),
    ("sqrt(t)", &[0.25, 4.0, 7.0]),
    ("sin(t^2)", &[0.3, 1.2]),
    ("cos(3*t + 1)", &[-0.4, 0.9]),
    ("exp(sin(t))", &[0.0, 2.0]),
    ("log(1 + t^2)", &[0.0, -1.3]),
    ("sqrt(1 + t^2)", &[0.0, 2.2]),
    ("sin(t)*cos(t)", &[0.4, 1.9]),
    ("t*exp(-t)", &[0.0, 2.0]),
    ("exp(t)/(1 + exp(t))", &[-1.0, 0.5]),
    ("log(sqrt(t) + 1)", &[0.3, 5.0]),
    ("sin(exp(t))", &[-0.5, 0.6]),
    ("exp(-t^2/2)", &[0.0, 1.3]),
    ("t^2*log(t)", &[0.8, 2.4]),
    ("sqrt(exp(t) + t^2)", &[0.0, 1.0]),
    ("cos(t)^3 - sin(t)^2", &[0.2, -1.1]),
    ("sin(t)/(2 + cos(t))", &[0.0, 3.0]),
    ("log(cos(t) + 2)", &[1.0, -0.6]),
    ("exp(t)*sin(2*t) + t", &[-0.3, 0.75]),
    ("1/sqrt(1 + t)", &[0.0, 2.0]),
    ("(sin(t) + 2)^(-1)", &[0.5, -1.4]),
];
