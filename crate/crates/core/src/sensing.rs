//! Synthetic temperature field and the Gaussian detection model.

use crate::firemodel::FireFront;
use crate::geometry::Point2;
use crate::num::Scalar;

/// Fire geometry handed over by the imaging sensor on detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FireDescriptor<T> {
    pub fire: usize,
    pub center: Point2<T>,
    pub a: T,
    pub b: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorReading<T> {
    pub uav: usize,
    pub time: T,
    /// Temperature, K.
    pub temperature: T,
    /// Backward-difference temperature rate, K/s.
    pub temperature_rate: T,
    /// Nearest active fire within sensing range.
    pub candidate: Option<usize>,
    /// Detection probability for `candidate`, zero when there is none.
    pub probability: T,
    /// Bearing from the UAV to the nearest point of the candidate's front.
    pub heading_to_fire: Option<T>,
    /// Present exactly when `probability >= γ`.
    pub detected: Option<FireDescriptor<T>>,
}

impl<T: Scalar> SensorReading<T> {
    /// Adds measurement noise to the temperature and recomputes the rate.
    pub fn perturb(&mut self, noise: T, prev: Option<&SensorReading<T>>, dt: T) {
        self.temperature = self.temperature + noise;
        self.temperature_rate = match prev {
            Some(p) => (self.temperature - p.temperature) / dt,
            None => T::zero(),
        };
    }
}

/// Sensor and temperature-field parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel<T> {
    pub t_ambient: T,
    pub t_fire: T,
    /// Length scale of the temperature plume around a front, m.
    pub plume_width: T,
    /// Standard deviation of the detection model, m.
    pub sigma: T,
    pub sensing_radius: T,
    /// Detection threshold γ.
    pub gamma: T,
}

/// `T_amb + (T_fire - T_amb)·max_j exp(-d_j²/(2σ_T²))` over active fires,
/// with `d_j` the distance to the front of fire `j`.
pub fn temperature_at<T: Scalar>(
    fires: &[FireFront<T>],
    p: Point2<T>,
    t_ambient: T,
    t_fire: T,
    plume_width: T,
) -> T {
    let nearest = fires
        .iter()
        .filter(|f| f.is_active())
        .map(|f| f.distance_to_front(p))
        .fold(T::infinity(), T::min);
    plume_temperature(nearest, t_ambient, t_fire, plume_width)
}

fn plume_temperature<T: Scalar>(distance: T, t_ambient: T, t_fire: T, plume_width: T) -> T {
    if distance.is_infinite() {
        return t_ambient;
    }
    let z = distance / plume_width;
    t_ambient + (t_fire - t_ambient) * (-(z * z) * T::half()).exp()
}

/// Gaussian detection probability `exp(-d²/(2σ²))`, zero beyond `R_sen`.
pub fn detection_probability<T: Scalar>(distance: T, sigma: T, sensing_radius: T) -> T {
    if distance > sensing_radius {
        T::zero()
    } else {
        let z = distance / sigma;
        (-(z * z) * T::half()).exp()
    }
}

impl<T: Scalar> SensorModel<T> {
    pub fn temperature_at(&self, fires: &[FireFront<T>], p: Point2<T>) -> T {
        temperature_at(fires, p, self.t_ambient, self.t_fire, self.plume_width)
    }

    /// One sensor sample for a UAV at `position`. The rate is the backward
    /// difference against `prev`, and zero on the first sample.
    pub fn sample(
        &self,
        uav: usize,
        position: Point2<T>,
        fires: &[FireFront<T>],
        prev: Option<&SensorReading<T>>,
        time: T,
        dt: T,
    ) -> SensorReading<T> {
        let mut nearest: Option<(usize, T)> = None;
        for (idx, fire) in fires.iter().enumerate() {
            if !fire.is_active() {
                continue;
            }
            let d = fire.distance_to_front(position);
            if nearest.is_none_or(|(_, best)| d < best) {
                nearest = Some((idx, d));
            }
        }
        let distance = nearest.map_or(T::infinity(), |(_, d)| d);
        let temperature =
            plume_temperature(distance, self.t_ambient, self.t_fire, self.plume_width);
        let temperature_rate = match prev {
            Some(p) => (temperature - p.temperature) / dt,
            None => T::zero(),
        };

        let mut reading = SensorReading {
            uav,
            time,
            temperature,
            temperature_rate,
            candidate: None,
            probability: T::zero(),
            heading_to_fire: None,
            detected: None,
        };
        let Some((idx, d)) = nearest.filter(|&(_, d)| d <= self.sensing_radius) else {
            return reading;
        };
        let fire = &fires[idx];
        reading.candidate = Some(fire.id);
        reading.probability = detection_probability(d, self.sigma, self.sensing_radius);
        if reading.probability > T::zero() {
            let target = if d > T::zero() {
                fire.nearest_front_point(position)
            } else {
                fire.center
            };
            let bearing = target - position;
            reading.heading_to_fire = Some(if bearing.norm() > T::zero() {
                bearing.angle()
            } else {
                T::zero()
            });
        }
        if reading.probability >= self.gamma {
            reading.detected = Some(FireDescriptor {
                fire: fire.id,
                center: fire.center,
                a: fire.a,
                b: fire.b,
            });
        }
        reading
    }
}
