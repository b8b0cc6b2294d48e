"""Computer algebra for separable algebras and bimodules in skeletal
semisimple monoidal 2-categories, over exact cyclotomic and prime fields."""

__version__ = "0.1.0"
