//! Delimited dataset text: a header row, then one row per observation.

use std::io::{Read, Write};

use logiclearn_core::binarize::Table;

use crate::error::Result;

pub fn read_table<R: Read>(reader: R, delimiter: u8) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(delimiter).has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<Vec<Vec<String>>, _>>()?;
    Ok(Table::new(header, rows)?)
}

pub fn write_table<W: Write>(writer: W, table: &Table, delimiter: u8) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    wtr.write_record(&table.header)?;
    for row in &table.rows {
        wtr.write_record(row)?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_quoting() {
        let text = "name,x,y\n\"a,b\",1,0\nc,,1\n";
        let table = read_table(text.as_bytes(), b',').unwrap();
        assert_eq!(table.rows[0][0], "a,b");
        assert_eq!(table.rows[1][1], "");
        let mut out = Vec::new();
        write_table(&mut out, &table, b',').unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(read_table("a,b\n1\n".as_bytes(), b',').is_err());
    }

    #[test]
    fn tab_delimited() {
        let table = read_table("a\tb\n1\t2\n".as_bytes(), b'\t').unwrap();
        assert_eq!(table.rows, [["1", "2"]]);
    }
}
