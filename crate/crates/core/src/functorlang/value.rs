use serde::Serialize;

/// A structured element of `F(X)`.
///
/// `Pt` and `Const` hold point indices of the base space and of the constant
/// space respectively. In a composite `F . G` the identity positions of `F`
/// hold `G`-values directly. `Set` children are sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FValue {
    Pt(usize),
    Const(usize),
    Pair(Box<FValue>, Box<FValue>),
    Inl(Box<FValue>),
    Inr(Box<FValue>),
    Set(Vec<FValue>),
}

impl FValue {
    pub fn pair(a: FValue, b: FValue) -> FValue {
        FValue::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: FValue) -> FValue {
        FValue::Inl(Box::new(a))
    }

    pub fn inr(a: FValue) -> FValue {
        FValue::Inr(Box::new(a))
    }

    /// A set value in canonical form.
    pub fn set(items: impl IntoIterator<Item = FValue>) -> FValue {
        let mut v: Vec<FValue> = items.into_iter().collect();
        v.sort();
        v.dedup();
        FValue::Set(v)
    }

    pub fn set_of_points(points: impl IntoIterator<Item = usize>) -> FValue {
        FValue::set(points.into_iter().map(FValue::Pt))
    }

    /// Base points referenced anywhere inside the value.
    pub fn points(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_points(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_points(&self, out: &mut Vec<usize>) {
        match self {
            FValue::Pt(p) => out.push(*p),
            FValue::Const(_) => {}
            FValue::Pair(a, b) => {
                a.collect_points(out);
                b.collect_points(out);
            }
            FValue::Inl(a) | FValue::Inr(a) => a.collect_points(out),
            FValue::Set(xs) => xs.iter().for_each(|x| x.collect_points(out)),
        }
    }

    /// Applies `f` to every base point.
    pub fn map_points(&self, f: &impl Fn(usize) -> usize) -> FValue {
        match self {
            FValue::Pt(p) => FValue::Pt(f(*p)),
            FValue::Const(c) => FValue::Const(*c),
            FValue::Pair(a, b) => FValue::pair(a.map_points(f), b.map_points(f)),
            FValue::Inl(a) => FValue::inl(a.map_points(f)),
            FValue::Inr(a) => FValue::inr(a.map_points(f)),
            FValue::Set(xs) => FValue::set(xs.iter().map(|x| x.map_points(f))),
        }
    }
}
