/// A real wavefunction on the half line `x > 0`.
pub trait WaveFunction {
    fn value(&self, x: f64) -> f64;
}

/// A wavefunction whose first derivative is known in closed form.
pub trait Differentiable: WaveFunction {
    fn derivative(&self, x: f64) -> f64;
}

impl<T: WaveFunction + ?Sized> WaveFunction for &T {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
}

impl<T: Differentiable + ?Sized> Differentiable for &T {
    fn derivative(&self, x: f64) -> f64 {
        (**self).derivative(x)
    }
}

/// The identically vanishing function.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl WaveFunction for Zero {
    fn value(&self, _x: f64) -> f64 {
        0.0
    }
}

impl Differentiable for Zero {
    fn derivative(&self, _x: f64) -> f64 {
        0.0
    }
}
