//! Station time-series CSV.
//!
//! ```text
//! #unit=F                      # or C; F is converted to Celsius on read
//! #station,lat,lon
//! @KSFO,37.62,-122.37          # one line per station, degrees
//! @KLAX,33.94,-118.41
//! 2020-01-01,51.2,60.0         # date, one value per station; empty = missing
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Fahrenheit,
    Celsius,
}

/// Inclusive latitude/longitude window in degrees (west and south negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BoundingBox {
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat_min..=self.lat_max).contains(&lat) && (self.lon_min..=self.lon_max).contains(&lon)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationSeries {
    /// Unit declared by the file; values in `samples` are Celsius when this
    /// is Fahrenheit.
    pub source_unit: Unit,
    pub station_ids: Vec<String>,
    /// `[lat, lon]` per station.
    pub coords: Vec<[f64; 2]>,
    pub dates: Vec<String>,
    /// One value per station per kept row.
    pub samples: Vec<Vec<f64>>,
}

impl StationSeries {
    pub fn n_stations(&self) -> usize {
        self.station_ids.len()
    }
}

pub fn fahrenheit_to_celsius(f: f64) -> f64 {
    (f - 32.0) * 5.0 / 9.0
}

pub fn parse_station_csv(text: &str, bbox: Option<&BoundingBox>) -> Result<StationSeries> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let (_, unit_line) = lines.next().ok_or_else(|| Error::parse(1, "missing `#unit=` header"))?;
    let source_unit = match unit_line.trim() {
        "#unit=F" => Unit::Fahrenheit,
        "#unit=C" => Unit::Celsius,
        other => return Err(Error::parse(1, format!("expected `#unit=F` or `#unit=C`, got `{other}`"))),
    };
    match lines.next() {
        Some((_, l)) if l.trim() == "#station,lat,lon" => {}
        _ => return Err(Error::parse(2, "expected `#station,lat,lon`")),
    }

    let mut ids = Vec::new();
    let mut coords = Vec::new();
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('@') {
            if !rows.is_empty() {
                return Err(Error::parse(lineno, "station line after data rows"));
            }
            let cells: Vec<&str> = rest.split(',').map(str::trim).collect();
            if cells.len() != 3 || cells[0].is_empty() {
                return Err(Error::parse(lineno, "station line must be `@id,lat,lon`"));
            }
            ids.push(cells[0].to_string());
            coords.push([number(cells[1], lineno)?, number(cells[2], lineno)?]);
        } else {
            rows.push((lineno, line));
        }
    }
    if ids.is_empty() {
        return Err(Error::parse(3, "no `@id,lat,lon` station lines"));
    }

    let selected: Vec<usize> =
        (0..ids.len()).filter(|&s| bbox.is_none_or(|b| b.contains(coords[s][0], coords[s][1]))).collect();
    if selected.is_empty() {
        return Err(Error::EmptyResult("no station inside the bounding box"));
    }

    let mut dates = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in rows {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != ids.len() + 1 {
            return Err(Error::parse(lineno, format!("expected {} cells, got {}", ids.len() + 1, cells.len())));
        }
        let mut values = Vec::with_capacity(selected.len());
        let mut complete = true;
        for (s, cell) in cells[1..].iter().enumerate() {
            // Non-numeric cells are errors even for unselected stations.
            let value = if cell.is_empty() { None } else { Some(number(cell, lineno)?) };
            if selected.binary_search(&s).is_ok() {
                match value {
                    Some(v) => values.push(match source_unit {
                        Unit::Fahrenheit => fahrenheit_to_celsius(v),
                        Unit::Celsius => v,
                    }),
                    None => complete = false,
                }
            }
        }
        if complete {
            dates.push(cells[0].to_string());
            samples.push(values);
        }
    }
    if samples.is_empty() {
        return Err(Error::EmptyResult("no complete data row"));
    }
    Ok(StationSeries {
        source_unit,
        station_ids: selected.iter().map(|&s| ids[s].clone()).collect(),
        coords: selected.iter().map(|&s| coords[s]).collect(),
        dates,
        samples,
    })
}

pub fn ingest_station_csv(path: &Path, bbox: Option<&BoundingBox>) -> Result<StationSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_station_csv(&text, bbox)
}

fn number(cell: &str, line: usize) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(line, format!("non-numeric cell `{cell}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "#unit=F\n#station,lat,lon\n@A,35.0,-100.0\n@B,52.0,-100.0\n@C,40.0,-95.0\n\
        2020-01-01,32,50,212\n2020-01-02,41,,50\n2020-01-03,14,60,\n";

    #[test]
    fn converts_fahrenheit() {
        let s = parse_station_csv(FIXTURE, None).unwrap();
        assert_eq!(s.source_unit, Unit::Fahrenheit);
        // Rows 2 and 3 each miss one station.
        assert_eq!(s.samples, vec![vec![0.0, 10.0, 100.0]]);
        assert_eq!(s.dates, vec!["2020-01-01"]);
    }

    #[test]
    fn bounding_box_selects_stations_before_dropping_rows() {
        let bbox = BoundingBox { lat_min: 30.0, lat_max: 49.0, lon_min: -120.0, lon_max: -90.0 };
        let s = parse_station_csv(FIXTURE, Some(&bbox)).unwrap();
        assert_eq!(s.station_ids, vec!["A", "C"]);
        // Row 2 is complete once B is excluded; row 3 still misses C.
        assert_eq!(s.samples.len(), 2);
        assert_eq!(s.samples[1], vec![5.0, 10.0]);
    }

    #[test]
    fn celsius_passes_through() {
        let s = parse_station_csv("#unit=C\n#station,lat,lon\n@X,1,2\nd1,3.5\nd2,4\nd3,-1\n", None).unwrap();
        assert_eq!(s.samples, vec![vec![3.5], vec![4.0], vec![-1.0]]);
        assert_eq!(s.coords, vec![[1.0, 2.0]]);
    }

    #[test]
    fn errors() {
        let empty_box = BoundingBox { lat_min: 0.0, lat_max: 1.0, lon_min: 0.0, lon_max: 1.0 };
        assert!(matches!(parse_station_csv(FIXTURE, Some(&empty_box)), Err(Error::EmptyResult(_))));
        assert!(matches!(parse_station_csv("#unit=K\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(parse_station_csv("#unit=C\n#stations\n@X,1,2\n", None).is_err());
        assert!(matches!(
            parse_station_csv("#unit=C\n#station,lat,lon\n@X,1,2\nd1,abc\n", None),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_station_csv("#unit=C\n#station,lat,lon\n@X,1,2\nd1,1,2\n", None).is_err());
        assert!(matches!(
            parse_station_csv("#unit=C\n#station,lat,lon\n@X,1,2\nd1,\n", None),
            Err(Error::EmptyResult(_))
        ));
    }
}
