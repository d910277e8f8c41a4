use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exact::{Circle, Point};

/// A set of circles (indexed densely from zero) and an optional point set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scene {
    circles: Vec<Circle>,
    points: Vec<Point>,
}

impl Scene {
    /// Rejects duplicate circles.
    pub fn new(circles: Vec<Circle>, points: Vec<Point>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(circles.len());
        for (i, c) in circles.iter().enumerate() {
            if !seen.insert(c) {
                return Err(Error::DegenerateInput(format!(
                    "duplicate circle at index {i}"
                )));
            }
        }
        Ok(Scene { circles, points })
    }

    pub fn from_circles(circles: Vec<Circle>) -> Result<Self> {
        Scene::new(circles, Vec::new())
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn circle(&self, id: usize) -> &Circle {
        &self.circles[id]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn with_points(mut self, points: Vec<Point>) -> Self {
        self.points = points;
        self
    }
}
