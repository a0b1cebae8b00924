use super::{add, call, div, mul, neg, num, pow, sub, Expr, Func, Var};

impl Expr {
    /// Symbolic partial derivative with respect to `var`.
    pub fn diff(&self, var: Var) -> Expr {
        match self {
            Expr::Num(_) => num(0.0),
            Expr::Var(v) => num(if *v == var { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.diff(var)),
            Expr::Add(a, b) => add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => add(
                mul(a.diff(var), (**b).clone()),
                mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => {
                let da = a.diff(var);
                let db = b.diff(var);
                if db.is_zero() {
                    return div(da, (**b).clone());
                }
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
            Expr::Pow(a, k) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return num(0.0);
                }
                mul(mul(num(*k as f64), pow((**a).clone(), k - 1)), da)
            }
            Expr::Call(func, a) => {
                let da = a.diff(var);
                if da.is_zero() {
                    return num(0.0);
                }
                let inner = (**a).clone();
                let outer = match func {
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Log => return div(da, inner),
                    Func::Sqrt => {
                        return div(da, mul(num(2.0), call(Func::Sqrt, inner)));
                    }
                };
                mul(outer, da)
            }
        }
    }

    /// Whether the expression depends on `var` at all.
    pub fn depends_on(&self, var: Var) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= v == var);
        found
    }
}
