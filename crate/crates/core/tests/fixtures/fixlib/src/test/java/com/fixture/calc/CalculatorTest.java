package com.fixture.calc;

import org.junit.Test;
import static org.junit.Assert.*;

public class CalculatorTest {
    @Test
    public void testSum() {
        Calculator calc = new Calculator();
        assertEquals(5, calc.sum(2, 3));
        assertEquals(5, calc.lastResult());
    }

    @Test
    public void testDivide() {
        Calculator calc = new Calculator();
        assertEquals(4, calc.divide(8, 2));
    }

    @Test
    public void testCube() {
        Calculator calc = new Calculator();
        assertEquals(27, calc.sum(9, 9, 9));
    }
}
