//! Hexadecimal floating-point formatting for bit-exact text round-trips,
//! in the C99 `%a` style (`0x1.5bf0a8b145769p+1`).

pub fn format(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0x0p+0".into() } else { "0x0p+0".into() };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & 0xf_ffff_ffff_ffff;
    let (lead, exp, mant) = if exp_bits == 0 {
        (0u64, -1022i64, mantissa) // subnormal
    } else {
        (1u64, exp_bits - 1023, mantissa)
    };
    let mut hex = format!("{mant:013x}");
    while hex.len() > 1 && hex.ends_with('0') {
        hex.pop();
    }
    if hex == "0" {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{hex}p{exp:+}")
    }
}

pub fn parse(s: &str) -> Option<f64> {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let s = s.strip_prefix("0x")?;
    let pidx = s.find(['p', 'P'])?;
    let (mant_str, exp_str) = s.split_at(pidx);
    let exp: i64 = exp_str[1..].parse().ok()?;
    let (int_str, frac_str) = match mant_str.find('.') {
        Some(i) => (&mant_str[..i], &mant_str[i + 1..]),
        None => (mant_str, ""),
    };
    let int_part = u64::from_str_radix(int_str, 16).ok()?;
    let mut value = int_part as f64;
    let mut scale = 1.0f64 / 16.0;
    for c in frac_str.chars() {
        let digit = c.to_digit(16)? as f64;
        value += digit * scale;
        scale /= 16.0;
    }
    let v = value * 2f64.powi(exp as i32);
    Some(if neg { -v } else { v })
}
