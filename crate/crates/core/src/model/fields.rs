// SPDX-License-Identifier: Apache-2.0

//! Uniform access to package fields by catalog name.
//!
//! Every stored field is an `Option<T>`, a `Vec<T>` or a `BTreeMap<String, T>`,
//! which lets reading, writing, validation and ablation share one code path.

use std::collections::BTreeMap;

use crate::license::LicenseExpression;
use crate::syntax::Value;

use super::types::*;

string_enum! {
    pub enum FieldState {
        Absent => "absent",
        NoAssertion => "no-assertion",
        Populated => "populated",
    }
}

/// Conversion between one stored item and its tree form.
pub trait ItemRepr: Sized {
    fn to_value(&self) -> Value;
    fn from_value(value: &Value) -> Result<Self, ValueError>;
    fn is_no_assertion(&self) -> bool {
        false
    }
}

/// A named field on a package.
pub trait FieldSlot {
    /// Tree form, or `None` when absent.
    fn get(&self) -> Option<Value>;
    fn state(&self) -> FieldState;
    fn set(&mut self, value: &Value) -> Result<(), ValueError>;
    fn clear(&mut self);
}

fn scalar(value: &Value) -> Result<&str, ValueError> {
    value.as_scalar().ok_or_else(|| ValueError(format!("expected a single value, found a {}", value.kind_name())))
}

macro_rules! scalar_repr {
    ($($ty:ty => $na:expr),* $(,)?) => {$(
        impl ItemRepr for $ty {
            fn to_value(&self) -> Value {
                Value::Scalar(self.to_string())
            }
            fn from_value(value: &Value) -> Result<Self, ValueError> {
                scalar(value)?.parse::<$ty>().map_err(|e| ValueError(e.to_string()))
            }
            fn is_no_assertion(&self) -> bool {
                let f: fn(&$ty) -> bool = $na;
                f(self)
            }
        }
    )*};
}

scalar_repr! {
    String => |_| false,
    ElementId => |_| false,
    Timestamp => |_| false,
    Presence => Presence::is_no_assertion,
    PrimaryPurpose => |_| false,
    SafetyRiskAssessment => SafetyRiskAssessment::is_no_assertion,
    DatasetType => |_| false,
    ConfidentialityLevel => ConfidentialityLevel::is_no_assertion,
    DatasetAvailability => DatasetAvailability::is_no_assertion,
}

impl ItemRepr for u64 {
    fn to_value(&self) -> Value {
        Value::Scalar(self.to_string())
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        let text = scalar(value)?;
        if !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ValueError(format!("'{text}' is not a non-negative integer")));
        }
        text.parse().map_err(|_| ValueError(format!("'{text}' is not a non-negative integer")))
    }
}

impl ItemRepr for f64 {
    fn to_value(&self) -> Value {
        Value::Scalar(self.to_string())
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        parse_decimal(scalar(value)?)
    }
}

impl ItemRepr for DownloadLocation {
    fn to_value(&self) -> Value {
        Value::Scalar(self.to_string())
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        DownloadLocation::parse(scalar(value)?)
    }
    fn is_no_assertion(&self) -> bool {
        matches!(self, DownloadLocation::NoAssertion)
    }
}

impl ItemRepr for MetricValue {
    fn to_value(&self) -> Value {
        Value::Scalar(self.to_string())
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        MetricValue::parse(scalar(value)?)
    }
}

impl ItemRepr for LicenseExpression {
    fn to_value(&self) -> Value {
        Value::Scalar(self.to_string())
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        LicenseExpression::parse(scalar(value)?).map_err(|e| ValueError(e.to_string()))
    }
}

impl ItemRepr for EnergyQuantity {
    fn to_value(&self) -> Value {
        Value::Map(vec![
            ("quantity".into(), Value::Scalar(self.quantity().to_string())),
            ("unit".into(), Value::Scalar(self.unit().to_string())),
        ])
    }
    fn from_value(value: &Value) -> Result<Self, ValueError> {
        let Value::Map(entries) = value else {
            return Err(ValueError("an energy entry needs 'quantity' and 'unit' keys".into()));
        };
        let mut quantity = None;
        let mut unit = None;
        for (key, item) in entries {
            let target = match key.as_str() {
                "quantity" => &mut quantity,
                "unit" => &mut unit,
                other => return Err(ValueError(format!("unexpected key '{other}' in energy entry"))),
            };
            if target.replace(scalar(item)?).is_some() {
                return Err(ValueError(format!("duplicate key '{key}' in energy entry")));
            }
        }
        match (quantity, unit) {
            (Some(q), Some(u)) => EnergyQuantity::new(parse_decimal(q)?, u),
            _ => Err(ValueError("an energy entry needs 'quantity' and 'unit' keys".into())),
        }
    }
}

impl<T: ItemRepr> FieldSlot for Option<T> {
    fn get(&self) -> Option<Value> {
        self.as_ref().map(ItemRepr::to_value)
    }
    fn state(&self) -> FieldState {
        match self {
            None => FieldState::Absent,
            Some(v) if v.is_no_assertion() => FieldState::NoAssertion,
            Some(_) => FieldState::Populated,
        }
    }
    fn set(&mut self, value: &Value) -> Result<(), ValueError> {
        *self = Some(T::from_value(value)?);
        Ok(())
    }
    fn clear(&mut self) {
        *self = None;
    }
}

impl<T: ItemRepr> FieldSlot for Vec<T> {
    fn get(&self) -> Option<Value> {
        (!self.is_empty()).then(|| Value::List(self.iter().map(ItemRepr::to_value).collect()))
    }
    fn state(&self) -> FieldState {
        if self.is_empty() {
            FieldState::Absent
        } else if self.iter().all(ItemRepr::is_no_assertion) {
            FieldState::NoAssertion
        } else {
            FieldState::Populated
        }
    }
    fn set(&mut self, value: &Value) -> Result<(), ValueError> {
        let Value::List(items) = value else {
            return Err(ValueError(format!("expected a list, found a {}", value.kind_name())));
        };
        *self = items.iter().map(T::from_value).collect::<Result<_, _>>()?;
        Ok(())
    }
    fn clear(&mut self) {
        self.clear();
    }
}

impl<T: ItemRepr> FieldSlot for BTreeMap<String, T> {
    fn get(&self) -> Option<Value> {
        (!self.is_empty()).then(|| Value::Map(self.iter().map(|(k, v)| (k.clone(), v.to_value())).collect()))
    }
    fn state(&self) -> FieldState {
        if self.is_empty() {
            FieldState::Absent
        } else {
            FieldState::Populated
        }
    }
    fn set(&mut self, value: &Value) -> Result<(), ValueError> {
        let Value::Map(entries) = value else {
            return Err(ValueError(format!("expected a mapping, found a {}", value.kind_name())));
        };
        let mut out = BTreeMap::new();
        for (key, item) in entries {
            if out.insert(key.clone(), T::from_value(item)?).is_some() {
                return Err(ValueError(format!("duplicate key '{key}'")));
            }
        }
        *self = out;
        Ok(())
    }
    fn clear(&mut self) {
        self.clear();
    }
}

/// Maps catalog names to struct fields, with an optional fallback struct.
macro_rules! field_slots {
    ($ty:ty { $($name:literal => $field:ident),* $(,)? } $(else $fallback:ident)?) => {
        impl $ty {
            pub(crate) fn slot(&self, name: &str) -> Option<&dyn $crate::model::FieldSlot> {
                match name {
                    $($name => Some(&self.$field),)*
                    other => field_slots!(@fallback self other slot $($fallback)?),
                }
            }

            pub(crate) fn slot_mut(&mut self, name: &str) -> Option<&mut dyn $crate::model::FieldSlot> {
                match name {
                    $($name => Some(&mut self.$field),)*
                    other => field_slots!(@fallback self other slot_mut $($fallback)?),
                }
            }
        }
    };
    (@fallback $this:ident $name:ident $method:ident) => {{
        let _ = $name;
        None
    }};
    (@fallback $this:ident $name:ident $method:ident $fallback:ident) => {
        $this.$fallback.$method($name)
    };
}
